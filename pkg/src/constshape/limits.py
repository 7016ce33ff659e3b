"""Resource caps. Defaults can be overridden through the CONSTSHAPE_CAPS
environment variable, e.g. ``CONSTSHAPE_CAPS="cells=2000000,patterns=50000"``."""

import os

from .errors import ResourceLimit, UsageError

DEFAULTS = {
    "cells": 4_000_000,      # cells of a single expanded pattern / support
    "patterns": 200_000,     # patterns in one language set
    "window": 200,           # radius of expanded windows
    "states": 100_000,       # states of a synchronizing graph
    "digits": 1_000_000,     # decimal digits kept exactly in big integers
    "table": 5_000,          # entries of a block-map table in searches
}

_overrides = {}


def _from_env():
    raw = os.environ.get("CONSTSHAPE_CAPS", "").strip()
    caps = {}
    if not raw:
        return caps
    for item in raw.split(","):
        if not item.strip():
            continue
        key, _, val = item.partition("=")
        key = key.strip()
        if key not in DEFAULTS:
            raise UsageError(f"unknown cap {key!r} in CONSTSHAPE_CAPS")
        try:
            caps[key] = int(val)
        except ValueError:
            raise UsageError(f"cap {key!r} needs an integer value") from None
    return caps


def cap(name):
    if name in _overrides:
        return _overrides[name]
    env = _from_env()
    return env.get(name, DEFAULTS[name])


def set_cap(name, value):
    if name not in DEFAULTS:
        raise UsageError(f"unknown cap {name!r}")
    _overrides[name] = int(value)


def reset_caps():
    _overrides.clear()


def check(name, value, what=""):
    limit = cap(name)
    if value > limit:
        raise ResourceLimit(f"{what or name}: {value} exceeds cap {name}={limit}")

"""Reading and writing substitution and block-map documents (JSON)."""

import hashlib
import json
from pathlib import Path

from . import lattice as lat
from .errors import InvalidDomain, SchemaError, UsageError
from .substitution import Substitution

FIXTURE_DIR = Path(__file__).resolve().parent / "fixtures"


def _fail(msg, field=None):
    raise SchemaError(f"{field}: {msg}" if field else msg)


def _int_vector(v, d, field):
    if not isinstance(v, list) or len(v) != d or not all(
            isinstance(c, int) and not isinstance(c, bool) for c in v):
        _fail(f"expected an array of {d} integers, got {v!r}", field)
    return tuple(v)


def substitution_from_doc(doc):
    if not isinstance(doc, dict):
        _fail("document must be an object")
    for key in ("dimension", "matrix", "support", "alphabet", "rules"):
        if key not in doc:
            _fail("missing field", key)
    d = doc["dimension"]
    if not isinstance(d, int) or isinstance(d, bool) or d < 1:
        _fail("must be a positive integer", "dimension")
    M = doc["matrix"]
    if not isinstance(M, list) or len(M) != d:
        _fail(f"expected {d} rows", "matrix")
    M = [_int_vector(row, d, f"matrix[{i}]") for i, row in enumerate(M)]
    sup = doc["support"]
    if not isinstance(sup, list) or not sup:
        _fail("expected a nonempty array of points", "support")
    F1 = [_int_vector(p, d, f"support[{i}]") for i, p in enumerate(sup)]
    alpha = doc["alphabet"]
    if not isinstance(alpha, list) or not alpha or not all(isinstance(a, str) for a in alpha):
        _fail("expected a nonempty array of strings", "alphabet")
    if len(set(alpha)) != len(alpha):
        _fail("symbols are not unique", "alphabet")
    rules = doc["rules"]
    if not isinstance(rules, dict):
        _fail("expected an object symbol -> array", "rules")
    for a in alpha:
        if a not in rules:
            _fail(f"no rule for symbol {a!r}", "rules")
        r = rules[a]
        if not isinstance(r, list) or len(r) != len(F1):
            _fail(f"rule for symbol {a!r} must have {len(F1)} entries", f"rules.{a}")
        for s in r:
            if s not in alpha:
                _fail(f"unknown symbol {s!r}", f"rules.{a}")
    extra = set(rules) - set(alpha)
    if extra:
        _fail(f"rules for symbols not in the alphabet: {sorted(extra)}", "rules")
    try:
        sys = lat.ExpansionSystem(M, F1)
    except InvalidDomain as e:
        _fail(str(e), "support")
    return Substitution(sys, alpha, {a: rules[a] for a in alpha})


def substitution_to_doc(sub):
    return {
        "dimension": sub.d,
        "matrix": [list(r) for r in sub.sys.L],
        "support": [list(f) for f in sub.sys.F1],
        "alphabet": list(sub.alphabet),
        "rules": {a: sub.names(sub.rules[i]) for i, a in enumerate(sub.alphabet)},
    }


def resolve_path(path):
    p = Path(path)
    if p.exists():
        return p
    for cand in (FIXTURE_DIR / p.name, FIXTURE_DIR / (p.name + ".json")):
        if cand.exists():
            return cand
    raise UsageError(f"no such file: {path}")


def read_json(path):
    p = resolve_path(path)
    try:
        return json.loads(p.read_text())
    except json.JSONDecodeError as e:
        raise SchemaError(f"{p}: line {e.lineno} column {e.colno}: {e.msg}") from None


def load(path):
    return substitution_from_doc(read_json(path))


def dumps(doc):
    return json.dumps(doc, indent=2, sort_keys=False) + "\n"


def save(sub, path):
    Path(path).write_text(dumps(substitution_to_doc(sub)))


def digest(obj):
    return hashlib.sha256(json.dumps(obj, sort_keys=True).encode()).hexdigest()


def fixture(name):
    return load(FIXTURE_DIR / f"{name}.json")

"""Recognizability: the computable bound, empirical radii and desubstitution.

ζ is recognizable with constant R when equal R-balls around L(i) and j in
a configuration x = ζ(y) force j ∈ L(ℤ^d) and y_i = y_{L⁻¹j}.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import lattice as lat
from .errors import Ambiguous, NoDecomposition, WindowTooSmall
from .substitution import (Pattern, box_window, expand_cycle, language,
                           periodic_seeds, power, seed_cycle, substitute_pattern,
                           window_array)
from .towers import Tower


# ------------------------------------------------------------- the bound

@dataclass
class RecogConstants:
    t: float
    r_bar: float
    a: Tower
    R_bar: Tower
    n_bar: Tower
    bound: Tower
    bound_log10: Tower
    variant: str

    def to_doc(self):
        return {"t": self.t, "r_bar": self.r_bar, "variant": self.variant,
                "a": self.a.to_doc(), "R_bar": self.R_bar.to_doc(),
                "n_bar": self.n_bar.to_doc(), "bound": self.bound.to_doc(),
                "bound_log10": self.bound_log10.to_doc()}


def recog_constants(sys, n_letters, variant="theorem"):
    """The recognizability bound for an alphabet of ``n_letters`` letters over (L, F1).

    variant "theorem" uses the closed form with the constant a. Variant
    "prop" keeps the repetitivity term R_X(9‖L‖^{|A|-1} r̄) and bounds it by
    (2‖F1‖ + ‖L‖^E (2‖F1‖+d)) r^t, E = |A|² + (|A|+1)^{(6r̄)^d}.
    """
    A = n_letters
    d = sys.d
    Ln = Tower.of(sys.mat_norm)
    Li = Tower.of(sys.inv_norm)
    F = Tower.of(lat.set_norm(sys.F1))
    t = -math.log(sys.mat_norm) / math.log(sys.inv_norm)
    r = sys.r_bar
    rb = Tower.of(r)
    E = Tower.of(A * A) + Tower.of(A + 1) ** Tower.of((6 * r) ** d)
    LE = Ln ** E
    a = ((2 * F + d) * (2 * F + LE)).ceil()
    tail = Tower.of(9) ** t * Ln ** (t * (A - 1)) * rb ** t
    if variant == "theorem":
        rep = a * tail
    elif variant == "prop":
        rep = (2 * F + LE * (2 * F + d)) * tail
    else:
        raise ValueError(f"unknown variant {variant!r}")
    Li_pow = Li ** (A - 1)
    R_bar = (Li_pow * rep + 4 * r).ceil()
    n_bar = (Tower.of(A) ** ((2 * R_bar + 6 * r) ** d)).ceil()
    inner = 2 * F + 7 * r + Li_pow * rep
    bound = 2 * Ln ** A * (2 * F + Ln ** (n_bar + A) * inner * rb ** t)
    return RecogConstants(t, r, a, R_bar, n_bar, bound, bound.log10(), variant)


def recog_bound(sub, variant="theorem"):
    return recog_constants(sub.sys, sub.n_letters, variant)


# ------------------------------------------------------ empirical radius

def seed_windows(sub, radius, steps=1, seed=None):
    """Arrays x and y on ⟦−radius, radius⟧^d with x ζ^p-fixed and ζ^steps(y) = x."""
    seeds = periodic_seeds(sub)
    if not seeds:
        raise WindowTooSmall("no periodic seed")
    seed = seed or seeds[0]
    cyc = seed_cycle(sub, seed)
    win = sorted(box_window(sub.d, radius))
    x = expand_cycle(sub, cyc, win, 0)
    y = expand_cycle(sub, cyc, win, (-steps) % seed.period)
    return window_array(x, radius, sub.d), window_array(y, radius, sub.d), seed


def _ball_keys(arr, radius, R, d):
    """For each center of ⟦−(radius−R), radius−R⟧^d, a group id of its ball-R pattern."""
    offs = sorted(lat.ball_points(R, d))
    m = radius - R
    n = 2 * m + 1
    cols = []
    for o in offs:
        sl = tuple(slice(R + c, R + c + n) for c in o)
        cols.append(arr[sl].reshape(-1))
    mat = np.stack(cols, axis=1)
    _, inv = np.unique(mat, axis=0, return_inverse=True)
    return inv.reshape(-1), m


def scan_radius(sys, x, y, radius, R):
    """Check the recognizability implication at radius R on the window.

    Returns (ok, testable, counts). Centers are those whose ball fits in
    the window; the preimage of an L-point c is read from y at L⁻¹c.
    """
    d = sys.d
    keys, m = _ball_keys(x, radius, R, d)
    pts = np.array(sorted(lat.box_points(-m, m, d)))
    # sorted(box_points) matches C-order flattening of the slices
    adj = np.array(sys.adj, dtype=np.int64)
    img = (pts @ adj.T) % sys.absdet
    in_img = ~img.any(axis=1)
    pre = np.full(len(pts), -1, dtype=np.int64)
    if in_img.any():
        q = (pts[in_img] @ adj.T) // sys.det
        pre[in_img] = y[tuple((q + radius).T)]
    ng = keys.max() + 1
    tot = np.bincount(keys, minlength=ng)
    nimg = np.bincount(keys, weights=in_img, minlength=ng).astype(np.int64)
    big = np.iinfo(np.int64).max
    lo = np.full(ng, big)
    hi = np.full(ng, -1)
    np.minimum.at(lo, keys[in_img], pre[in_img])
    np.maximum.at(hi, keys[in_img], pre[in_img])
    mixed = (nimg > 0) & (nimg < tot)
    split = (nimg > 0) & (lo != hi)
    testable = bool(in_img.any() and (~in_img).any())
    counts = {"centers": int(len(pts)), "lattice_centers": int(in_img.sum()),
              "mixed_groups": int(mixed.sum()), "split_groups": int(split.sum())}
    return not (mixed.any() or split.any()), testable, counts


def empirical_recognizability(sub, window_radius=32, R_max=16, x=None, y=None):
    """Smallest R ≤ R_max for which the implication holds on an expanded seed window."""
    if x is None:
        x, y, _ = seed_windows(sub, window_radius)
    fails = None
    tested = []
    for R in range(0, R_max + 1):
        if R >= window_radius:
            break
        ok, testable, counts = scan_radius(sub.sys, x, y, window_radius, R)
        if not testable:
            break
        tested.append((R, ok, counts))
        if ok:
            return {"R_fail_below": fails, "R_pass": R, "window_radius": window_radius,
                    "tested": tested}
        fails = R
    if not tested:
        raise WindowTooSmall(f"no radius up to {R_max} is testable in a window of radius {window_radius}")
    return {"R_fail_below": fails, "R_pass": None, "window_radius": window_radius,
            "tested": tested}


def power_law_check(sub, R, window_radius=32, seed=None):
    """If R is a recognizability radius for ζ, test 2‖L‖R for ζ² on the same seed window."""
    x, y2, seed = seed_windows(sub, window_radius, steps=2, seed=seed)
    sub2 = power(sub, 2)
    R2 = int(math.ceil(2 * sub.sys.mat_norm * R - 1e-9))
    if R2 >= window_radius:
        raise WindowTooSmall(f"radius {R2} does not fit a window of radius {window_radius}")
    ok, testable, counts = scan_radius(sub2.sys, x, y2, window_radius, R2)
    return {"R": R, "R2": R2, "holds": ok and testable, "testable": testable, "counts": counts}


# -------------------------------------------------------- desubstitution

@dataclass
class Desubstitution:
    preimage: Pattern
    j: tuple
    interior: frozenset
    consistent: list


def _interior(cells, R, d):
    ball = lat.ball_points(R, d)
    return frozenset(p for p in cells if all(lat.vadd(p, o) in cells for o in ball))


def _parse(sub, cells, interior, j):
    """Preimage letters for the shift j, or None if some full block is not a ζ-image."""
    sys = sub.sys
    inv = {}
    for a, r in enumerate(sub.rules):
        inv.setdefault(r, []).append(a)
    ms = {sys.decompose(lat.vadd(n, j))[0] for n in interior}
    pre = {}
    for m in sorted(ms):
        base = lat.vsub(sys.apply(m), j)
        block = [lat.vadd(base, f) for f in sys.F1]
        if not all(b in interior for b in block):
            continue
        letters = inv.get(tuple(cells[b] for b in block))
        if not letters:
            return None
        pre[m] = letters
    return pre


def desubstitute(sub, window, R=0):
    """Write the window as S^j ζ(x') on its interior (cells whose R-ball is in the window).

    The window is read as w_n = ζ(x')_{n+j}. A shift is consistent when
    every block L(m)+F1−j inside the interior is a ζ-image and the
    preimage is a legal pattern. Exactly one consistent shift with one
    letter per block is required.
    """
    cells = window.cells if isinstance(window, Pattern) else dict(window)
    d = sub.d
    interior = _interior(cells, R, d)
    consistent = []
    for j in sorted(sub.sys.F1):
        pre = _parse(sub, cells, interior, j)
        if not pre:
            continue
        if all(len(v) == 1 for v in pre.values()):
            xp = Pattern({m: v[0] for m, v in pre.items()})
            if not _legal(sub, xp):
                continue
        consistent.append((j, pre))
    if not consistent:
        raise NoDecomposition("no shift j in F1 parses the window into ζ-images of a legal pattern")
    if len(consistent) > 1:
        raise Ambiguous(f"{len(consistent)} shifts parse the window: "
                        f"{[c[0] for c in consistent]}")
    j, pre = consistent[0]
    if any(len(v) > 1 for v in pre.values()):
        raise Ambiguous("a block has several preimage letters")
    xp = Pattern({m: v[0] for m, v in pre.items()})
    return Desubstitution(xp, j, interior, [c[0] for c in consistent])


def _legal(sub, xp):
    """All patterns of xp over the unit ball (where fully present) are in the language."""
    ball = sorted(lat.ball_points(1, sub.d))
    lang = language(sub, ball)
    cells = xp.cells
    for c in cells:
        try:
            w = tuple(cells[lat.vadd(c, o)] for o in ball)
        except KeyError:
            continue
        if w not in lang:
            return False
    return True


def roundtrip_ok(sub, window, res):
    """S^j ζ(x') agrees with the window on the parsed interior cells."""
    img = substitute_pattern(sub, res.preimage).cells
    cells = window.cells if isinstance(window, Pattern) else window
    for n in res.interior:
        q = lat.vadd(n, res.j)
        if q in img and img[q] != cells[n]:
            return False
    return True


def shift_image(sub, x, f):
    """The pattern S^f ζ(x), i.e. n ↦ ζ(x)_{n+f}."""
    img = substitute_pattern(sub, x).cells
    return Pattern({lat.vsub(q, f): a for q, a in img.items()})


def partition_check(sub, window, R=0):
    """The shifts j ∈ F1 whose class S^j ζ(X) is consistent with the window."""
    cells = window.cells
    interior = _interior(cells, R, sub.d)
    out = []
    for j in sorted(sub.sys.F1):
        pre = _parse(sub, cells, interior, j)
        if pre and all(len(v) == 1 for v in pre.values()) and \
                _legal(sub, Pattern({m: v[0] for m, v in pre.items()})):
            out.append(j)
    return out


__all__ = ["RecogConstants", "recog_bound", "recog_constants",
           "empirical_recognizability", "power_law_check", "desubstitute",
           "partition_check", "shift_image", "roundtrip_ok", "seed_windows",
           "scan_radius", "box_window"]

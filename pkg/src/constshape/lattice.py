"""Exact integer lattice arithmetic for expansion systems (L, F1).

Points are plain tuples of ints. Membership and congruence questions are
answered with the adjugate and determinant of L, so nothing that decides a
property goes through floating point. Real norms only feed radii and bounds
and are rounded outward.
"""

import math
from fractions import Fraction
from itertools import product

import numpy as np

from . import limits
from .errors import (AmbiguousExpansion, InvalidDomain, NotCovered,
                     NotExpansive, SingularMatrix)

EXPANSION_TOL = 1e-9
NORM_SLACK = 1e-12


def _up(x, rel=NORM_SLACK):
    return x * (1.0 + rel) + 1e-300


# ---------------------------------------------------------------- matrices

def as_matrix(M):
    rows = tuple(tuple(int(v) for v in row) for row in M)
    d = len(rows)
    if d == 0 or any(len(r) != d for r in rows):
        raise NotExpansive("matrix must be square and nonempty")
    return rows


def det(M):
    """Exact determinant (Bareiss fraction-free elimination)."""
    a = [list(r) for r in M]
    n = len(a)
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def adjugate(M):
    n = len(M)
    if n == 1:
        return ((1,),)
    cof = []
    for i in range(n):
        row = []
        for j in range(n):
            minor = [r[:j] + r[j + 1:] for k, r in enumerate(M) if k != i]
            row.append((-1) ** (i + j) * det(minor))
        cof.append(row)
    return tuple(tuple(cof[j][i] for j in range(n)) for i in range(n))


def mat_vec(M, v):
    return tuple(sum(m * x for m, x in zip(row, v)) for row in M)


def mat_mul(A, B):
    cols = list(zip(*B))
    return tuple(tuple(sum(a * b for a, b in zip(row, c)) for c in cols) for row in A)


def mat_pow(M, n):
    d = len(M)
    R = tuple(tuple(int(i == j) for j in range(d)) for i in range(d))
    for _ in range(n):
        R = mat_mul(M, R)
    return R


def vadd(u, v):
    return tuple(a + b for a, b in zip(u, v))


def vsub(u, v):
    return tuple(a - b for a, b in zip(u, v))


def vneg(u):
    return tuple(-a for a in u)


def norm_sq(v):
    return sum(a * a for a in v)


def set_norm_sq(F):
    """Exact squared norm ‖F‖² = max ‖x‖² (0 for the empty set)."""
    return max((norm_sq(x) for x in F), default=0)


def set_norm(F):
    return _up(math.sqrt(set_norm_sq(F)))


def minkowski(*sets):
    out = {tuple()}
    first = True
    for S in sets:
        if first:
            out = set(S)
            first = False
        else:
            out = {vadd(a, b) for a in out for b in S}
    return out


def sorted_points(S):
    return sorted(S)


# ------------------------------------------------------------------ norms

def singular_values(M):
    s = np.linalg.svd(np.array(M, dtype=float), compute_uv=False)
    return float(s.max()), float(s.min())


def check_expansion(M):
    """Validate an expansion matrix.

    Returns a dict with det, mat_norm (‖M‖) and inv_norm (‖M⁻¹‖), both
    rounded up. Raises SingularMatrix, NotExpansive or AmbiguousExpansion.
    """
    M = as_matrix(M)
    D = det(M)
    if D == 0:
        raise SingularMatrix("determinant is 0")
    smax, smin = singular_values(M)
    if abs(smin - 1.0) < EXPANSION_TOL:
        raise AmbiguousExpansion(
            f"smallest singular value {smin!r} is within {EXPANSION_TOL} of 1")
    if smin < 1.0:
        raise NotExpansive(f"smallest singular value {smin!r} is not > 1")
    return {"det": D, "mat_norm": _up(smax), "inv_norm": _up(1.0 / smin),
            "sigma_min": smin, "sigma_max": smax}


# ------------------------------------------------------- expansion systems

class ExpansionSystem:
    """An expansion matrix L together with a fundamental domain F1.

    F1 keeps the caller's order, since substitution rules are aligned with
    it. Construction validates both the matrix and the domain.
    """

    def __init__(self, L, F1):
        self.L = as_matrix(L)
        self.d = len(self.L)
        info = check_expansion(self.L)
        self.det = info["det"]
        self.absdet = abs(self.det)
        self.mat_norm = info["mat_norm"]
        self.inv_norm = info["inv_norm"]
        self.adj = adjugate(self.L)
        self.F1 = tuple(tuple(int(c) for c in f) for f in F1)
        report = check_fundamental_domain(self.L, self.F1)
        if not report["ok"]:
            raise InvalidDomain("; ".join(report["violations"]))
        self.F1set = frozenset(self.F1)
        self._residue = {self.residue(f): f for f in self.F1}
        self.inv_F1_norm_sq = max(self.inv_norm_sq_of(f) for f in self.F1)
        self.inv_F1_norm = _up(math.sqrt(self.inv_F1_norm_sq))
        denom = (1.0 - self.inv_norm) * (1.0 - NORM_SLACK)
        self.r_bar = _up(self.inv_F1_norm / denom)

    def __repr__(self):
        return f"ExpansionSystem(L={self.L}, F1={self.F1})"

    def __eq__(self, other):
        return (isinstance(other, ExpansionSystem) and self.L == other.L
                and self.F1 == other.F1)

    def __hash__(self):
        return hash((self.L, self.F1))

    def apply(self, v):
        return mat_vec(self.L, v)

    def residue(self, v):
        """Class of v in ℤ^d / L(ℤ^d), as adj(L)v mod |det L|."""
        return tuple(x % self.absdet for x in mat_vec(self.adj, v))

    def in_image(self, v):
        return all(x % self.absdet == 0 for x in mat_vec(self.adj, v))

    def solve(self, v):
        """L⁻¹v, which must be an integer vector."""
        w = mat_vec(self.adj, v)
        return tuple(x // self.det for x in w)

    def inv_norm_sq_of(self, v):
        """‖L⁻¹v‖² as an exact fraction."""
        return Fraction(norm_sq(mat_vec(self.adj, v)), self.det * self.det)

    def decompose(self, p):
        """The unique (j, f) with p = L(j) + f and f in F1."""
        f = self._residue[self.residue(p)]
        return self.solve(vsub(p, f)), f

    def preimage_set(self, S):
        """L⁻¹(S) ∩ ℤ^d."""
        return {self.solve(v) for v in S if self.in_image(v)}

    def power(self, n):
        Ln = mat_pow(self.L, n)
        return ExpansionSystem(Ln, support_iterate(self, n))


def check_fundamental_domain(L, F1):
    """Report on whether F1 is a fundamental domain of L(ℤ^d) containing 0."""
    L = as_matrix(L)
    D = det(L)
    adj = adjugate(L)
    d = len(L)
    violations = []
    F1 = [tuple(f) for f in F1]
    if any(len(f) != d for f in F1):
        violations.append("point with wrong dimension")
        return {"ok": False, "violations": violations, "duplicates": []}
    if len(set(F1)) != len(F1):
        violations.append("repeated point")
    if len(F1) != abs(D):
        violations.append(f"|F1|={len(F1)} but |det L|={abs(D)}")
    if (0,) * d not in F1:
        violations.append("0 not in F1")
    seen = {}
    dups = []
    for f in F1:
        key = tuple(x % abs(D) for x in mat_vec(adj, f)) if D else f
        if key in seen and seen[key] != f:
            dups.append((seen[key], f))
            violations.append(f"{seen[key]} is congruent to {f} mod L(Z^d)")
        seen.setdefault(key, f)
    return {"ok": not violations, "violations": violations, "duplicates": dups}


def support_iterate(sys, n, with_digits=False):
    """The support Fₙ, built by F_{n+1} = L(Fₙ) + F1 with F₀ = {0}.

    Points come in a deterministic order (outer loop over Fₙ). With
    with_digits, also return the map point -> (f₀, ..., f_{n-1}) where
    point = Σ L^i f_i.
    """
    limits.check("cells", sys.absdet ** n, f"|F_{n}|")
    pts = [(0,) * sys.d]
    digits = {pts[0]: ()} if with_digits else None
    for _ in range(n):
        nxt = []
        nd = {} if with_digits else None
        for j in pts:
            Lj = sys.apply(j)
            for f in sys.F1:
                p = vadd(Lj, f)
                nxt.append(p)
                if with_digits:
                    nd[p] = (f,) + digits[j]
        pts = nxt
        digits = nd
    if with_digits:
        return pts, digits
    return pts


def digit_decompose(sys, K, p, n_max=64):
    """Write p = Lⁿ(k) + Σ_{i<n} L^i(f_i) with k in K and n minimal."""
    K = set(K)
    digits = []
    q = tuple(p)
    for n in range(n_max + 1):
        if q in K:
            return n, q, digits
        q, f = sys.decompose(q)
        digits.append(f)
    raise NotCovered(f"{p} not in L^n(K)+F_n for n <= {n_max}")


def shrink(F, E):
    """F^{∘E} = {f in F : f + E ⊆ F}."""
    F = set(F)
    E = list(E)
    return {f for f in F if all(vadd(f, e) in F for e in E)}


def sym_diff_ratio(F, v):
    """|F Δ (v + F)| / |F| as an exact fraction."""
    F = set(F)
    if not F:
        raise ValueError("empty set")
    moved = {vadd(x, v) for x in F}
    return Fraction(len(F ^ moved), len(F))


def ball_points(r, d):
    """Lattice points of the closed Euclidean ball of radius r about 0."""
    if r < 0:
        return set()
    R = int(math.floor(r + 1e-9))
    r2 = r * r * (1 + 1e-9) + 1e-12
    return {x for x in product(range(-R, R + 1), repeat=d) if norm_sq(x) <= r2}


def box_points(lo, hi, d):
    return set(product(range(lo, hi + 1), repeat=d))


def interval(a, b):
    """⟦a, b⟧ as a set of 1-tuples."""
    return {(i,) for i in range(a, b + 1)}

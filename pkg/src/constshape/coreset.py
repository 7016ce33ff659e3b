"""The remainder set K, the covering set C and the support-change set A."""

import math

from . import lattice as lat
from .errors import InvariantBreach, NotStabilized, ResourceLimit


def digit_map(sys, x):
    """T(x) = j where x = L(j) + f, f in F1."""
    return sys.decompose(x)[0]


def compute_K(sys, m_max=64, window_radius=15, n_max=None):
    """K = ⋃_m (Id − L^m)⁻¹(F_m) ∩ ℤ^d and the index j where the union stops growing.

    A point x satisfies x = L^m x + f with f in F_m exactly when the digit
    map T returns to x after m steps, so K is the set of periodic points of
    T. T maps the ball of radius r̄ into itself and every orbit drifts into
    it, so all periodic points live there and a finite scan finds them all.
    j_stable is the largest minimal period. Coverage of a window is checked
    before returning.
    """
    B = lat.ball_points(sys.r_bar, sys.d)
    T = {x: digit_map(sys, x) for x in B}
    K = {}
    for x in sorted(B):
        y, seen = x, []
        while y in T and y not in seen and len(seen) <= m_max:
            seen.append(y)
            y = T[y]
        if y == x and seen:
            K[x] = len(seen)
        elif y not in T:
            raise InvariantBreach(f"digit map left the ball at {y}")
    if not K:
        raise InvariantBreach("no periodic point of the digit map")
    if max(K.values()) > m_max:
        raise NotStabilized(f"period above m_max={m_max}")
    Lpow = {}
    for x, m in K.items():
        # exact restatement: (Id - L^m)x = Σ_{i<m} L^i f_i, an element of F_m
        y, acc = x, (0,) * sys.d
        for i in range(m):
            y, f = sys.decompose(y)
            acc = lat.vadd(acc, lat.mat_vec(Lpow.setdefault(i, lat.mat_pow(sys.L, i)), f))
        Lm = Lpow.setdefault(m, lat.mat_pow(sys.L, m))
        if y != x or lat.vsub(x, lat.mat_vec(Lm, x)) != acc:
            raise InvariantBreach(f"{x} is not periodic with period {m}")
    Kset = set(K)
    if window_radius:
        coverage_check(sys, Kset, window_radius, n_max)
    return Kset, max(K.values())


def coverage_check(sys, K, radius, n_max=None):
    """Every point of ⟦−radius, radius⟧^d lies in Lⁿ(K)+Fₙ for some n ≤ n_max."""
    if n_max is None:
        n_max = 64
    worst = 0
    for p in lat.box_points(-radius, radius, sys.d):
        n, _, _ = lat.digit_decompose(sys, K, p, n_max)
        worst = max(worst, n)
    return worst


def _least_fixpoint(sys, addend, bound, what):
    d = sys.d
    cur = {(0,) * d}
    steps = 0
    while True:
        pool = {lat.vadd(c, a) for c in cur for a in addend}
        nxt = sys.preimage_set(pool) | cur
        if nxt == cur:
            return cur
        cur = nxt
        steps += 1
        if lat.set_norm_sq(cur) > (bound + 1) ** 2 or steps > 10_000:
            raise NotStabilized(f"{what} iterates left the norm bound {bound}")


def compute_C(sys, A, F):
    """Least fixpoint of C_{n+1} = L⁻¹(C_n + A + F − F1) ∩ ℤ^d with C₀ = {0}."""
    A, F = set(A), set(F)
    zero = (0,) * sys.d
    if zero not in A:
        raise ValueError("0 must belong to A")
    if not sys.F1set <= F:
        raise ValueError("F must contain F1")
    addend = lat.minkowski(A, F, {lat.vneg(f) for f in sys.F1})
    return _least_fixpoint(sys, addend, C_norm_bound(sys, A, F), "C")


def C_norm_bound(sys, A, F):
    """(‖L⁻¹(A+F)‖ + ‖L⁻¹(F1)‖) / (1 − ‖L⁻¹‖)."""
    AF = lat.minkowski(A, F)
    top = math.sqrt(max(sys.inv_norm_sq_of(v) for v in AF)) + sys.inv_F1_norm
    return lat._up(top / (1.0 - sys.inv_norm))


def compute_C_LF(sys):
    """C_{L,F1}: the covering set with A = {0} and F = F1 + F1."""
    return compute_C(sys, {(0,) * sys.d}, lat.minkowski(sys.F1, sys.F1))


def compute_A_supportchange(sys, G1):
    """Least fixpoint of A_{n+1} = L⁻¹(A_n + G1 + G1 − F1) ∩ ℤ^d with A₀ = {0}."""
    G1 = [tuple(g) for g in G1]
    addend = lat.minkowski(G1, G1, {lat.vneg(f) for f in sys.F1})
    top = math.sqrt(max(sys.inv_norm_sq_of(v) for v in addend))
    bound = lat._up(top / (1.0 - sys.inv_norm))
    return _least_fixpoint(sys, addend, bound, "A")


def check_C_inclusions(sys, C, A, F, n_max=3):
    """The covering-set inclusions, returned as a dict of booleans.

    - A+F ⊆ C+A+F ⊆ L(C)+F1
    - Lⁿ(C+A+F)+Fₙ ⊆ L^{n+1}(C)+F_{n+1}
    - C + Σ_{i≤n} L^i(A+F) ⊆ L^{n+1}(C)+F_{n+1}
    """
    C, A, F = set(C), set(A), set(F)
    AF = lat.minkowski(A, F)
    CAF = lat.minkowski(C, AF)
    LC_F1 = lat.minkowski({sys.apply(c) for c in C}, sys.F1)
    out = {"item1": AF <= CAF <= LC_F1}
    item2 = item3 = True
    partial = set(C)
    for n in range(0, n_max + 1):
        Ln = lat.mat_pow(sys.L, n)
        Ln1 = lat.mat_pow(sys.L, n + 1)
        Fn = lat.support_iterate(sys, n)
        Fn1 = set(lat.support_iterate(sys, n + 1))
        rhs = lat.minkowski({lat.mat_vec(Ln1, c) for c in C}, Fn1)
        lhs2 = lat.minkowski({lat.mat_vec(Ln, v) for v in CAF}, Fn)
        item2 = item2 and lhs2 <= rhs
        partial = lat.minkowski(partial, {lat.mat_vec(Ln, v) for v in AF})
        item3 = item3 and partial <= rhs
    out["item2"] = item2
    out["item3"] = item3
    return out


def check_C_telescoping(sys, C, n_max=4):
    """C + Fₙ + Fₙ ⊆ Lⁿ(C) + Fₙ for n ≤ n_max."""
    for n in range(1, n_max + 1):
        Fn = lat.support_iterate(sys, n)
        Ln = lat.mat_pow(sys.L, n)
        lhs = lat.minkowski(C, Fn, Fn)
        rhs = lat.minkowski({lat.mat_vec(Ln, c) for c in C}, Fn)
        if not lhs <= rhs:
            return False
    return True


def check_A_supportchange(sys, G1, A, K2, k_max=3):
    """K2 + A + G_k ⊆ L^k(K2 + A) + F_k for k ≤ k_max."""
    gsys = lat.ExpansionSystem(sys.L, G1)
    B = lat.minkowski(K2, A)
    for k in range(1, k_max + 1):
        Gk = lat.support_iterate(gsys, k)
        Fk = lat.support_iterate(sys, k)
        Lk = lat.mat_pow(sys.L, k)
        lhs = lat.minkowski(B, Gk)
        rhs = lat.minkowski({lat.mat_vec(Lk, b) for b in B}, Fk)
        if not lhs <= rhs:
            return False
    return True


def core_sets(sys):
    """K, C_{L,F1} and their norms next to the norm bounds."""
    K, j = compute_K(sys)
    C = compute_C_LF(sys)
    zero = {(0,) * sys.d}
    return {
        "K": K, "j_stable": j, "C": C,
        "bounds": {
            "K_norm": math.sqrt(lat.set_norm_sq(K)), "K_bound": sys.r_bar,
            "C_norm": math.sqrt(lat.set_norm_sq(C)),
            "C_bound": C_norm_bound(sys, zero, lat.minkowski(sys.F1, sys.F1)),
        },
    }


__all__ = ["compute_K", "compute_C", "compute_C_LF", "compute_A_supportchange",
           "check_C_inclusions", "check_C_telescoping", "check_A_supportchange",
           "coverage_check", "core_sets", "ResourceLimit"]

"""Constant-shape substitutions: validation, iteration, periodic germs,
language enumeration, complexity and repetitivity.

Letters are stored as integer ids 0..|A|-1; the display names live in
``Substitution.alphabet``. Rules are aligned with ``sys.F1``.
"""

import math
import warnings
from itertools import product

import numpy as np

from . import coreset
from . import lattice as lat
from . import limits
from .errors import (IncompleteLanguage, InvalidSubstitution, InvariantBreach,
                     NotFolner)


class Pattern:
    """A finite map point -> letter id."""

    __slots__ = ("cells",)

    def __init__(self, cells):
        self.cells = dict(cells)

    @property
    def support(self):
        return frozenset(self.cells)

    def __len__(self):
        return len(self.cells)

    def __getitem__(self, p):
        return self.cells[p]

    def __contains__(self, p):
        return p in self.cells

    def __eq__(self, other):
        return isinstance(other, Pattern) and self.cells == other.cells

    def __hash__(self):
        return hash(frozenset(self.cells.items()))

    def __repr__(self):
        return f"Pattern({dict(sorted(self.cells.items()))})"

    def translate(self, v):
        return Pattern({lat.vadd(p, v): a for p, a in self.cells.items()})

    def restrict(self, P):
        return Pattern({p: self.cells[p] for p in P})

    def normal_form(self):
        """Cells translated so the lexicographically least point is the origin."""
        if not self.cells:
            return ()
        m = min(self.cells)
        return tuple(sorted((lat.vsub(p, m), a) for p, a in self.cells.items()))

    def as_tuple(self, support):
        return tuple(self.cells[p] for p in support)


class Substitution:
    """A map from letters to patterns with support F1 under an expansion L."""

    def __init__(self, sys, alphabet, rules):
        self.sys = sys
        self.alphabet = [str(a) for a in alphabet]
        if len(set(self.alphabet)) != len(self.alphabet):
            raise InvalidSubstitution("alphabet symbols are not unique")
        self.index = {a: i for i, a in enumerate(self.alphabet)}
        self.rules = []
        for a in self.alphabet:
            r = rules[a] if isinstance(rules, dict) else rules[self.index[a]]
            r = list(r)
            if len(r) != len(sys.F1):
                raise InvalidSubstitution(
                    f"rule for {a!r} has {len(r)} cells, support has {len(sys.F1)}")
            ids = []
            for s in r:
                if isinstance(s, str):
                    if s not in self.index:
                        raise InvalidSubstitution(f"rule for {a!r} uses unknown symbol {s!r}")
                    ids.append(self.index[s])
                else:
                    ids.append(int(s))
            self.rules.append(tuple(ids))
        self.rules = tuple(self.rules)
        self.table = np.array(self.rules, dtype=np.int64).reshape(len(self.alphabet), len(sys.F1))
        self.cell = {f: k for k, f in enumerate(sys.F1)}
        self._cache = {}

    @classmethod
    def from_ids(cls, sys, alphabet, rules):
        return cls(sys, alphabet, [tuple(int(x) for x in r) for r in rules])

    def __repr__(self):
        return f"Substitution(L={self.sys.L}, |A|={len(self.alphabet)})"

    def __eq__(self, other):
        return (isinstance(other, Substitution) and self.sys == other.sys
                and self.alphabet == other.alphabet and self.rules == other.rules)

    def __hash__(self):
        return hash((self.sys, tuple(self.alphabet), self.rules))

    @property
    def n_letters(self):
        return len(self.alphabet)

    @property
    def d(self):
        return self.sys.d

    def image(self, a):
        """ζ(a) as a Pattern over F1."""
        return Pattern({f: self.rules[a][k] for k, f in enumerate(self.sys.F1)})

    def names(self, ids):
        return [self.alphabet[i] for i in ids]

    def cached(self, key, fn):
        if key not in self._cache:
            self._cache[key] = fn()
        return self._cache[key]

    def core(self):
        """K, j_stable and C_{L,F1}, computed once."""
        def go():
            K, j = coreset.compute_K(self.sys)
            return {"K": K, "j": j, "C": coreset.compute_C_LF(self.sys)}
        return self.cached("core", go)


# ------------------------------------------------------------ validation

def validate(sub, check_folner=True):
    """Check a substitution; returns a report dict or raises on the first failure."""
    report = {"lattice": True, "rules": True}
    for a, r in zip(sub.alphabet, sub.rules):
        if len(r) != len(sub.sys.F1):
            raise InvalidSubstitution(f"rule for {a!r} has wrong support size")
        if any(not 0 <= s < sub.n_letters for s in r):
            raise InvalidSubstitution(f"rule for {a!r} has an out-of-range symbol")
    if check_folner:
        from .folner import decide_folner
        verdict = decide_folner(sub.sys)
        report["folner"] = verdict.is_folner
        if not verdict.is_folner:
            raise NotFolner("the support sequence (F_n) is not Følner")
    prim, k = is_primitive(sub)
    report["primitive"] = prim
    report["primitive_exponent"] = k
    if prim:
        used = {w[0] for w in language(sub, [(0,) * sub.d]).words}
        unused = [sub.alphabet[a] for a in range(sub.n_letters) if a not in used]
        report["unused_letters"] = unused
        if unused:
            warnings.warn(f"letters never occurring in the subshift: {unused}")
    return report


def incidence_matrix(sub):
    """M[a][b] = number of cells of ζ(a) holding b."""
    n = sub.n_letters
    M = [[0] * n for _ in range(n)]
    for a, r in enumerate(sub.rules):
        for b in r:
            M[a][b] += 1
    return M


def is_primitive(sub):
    """(True, k) with k the least power making M positive, within the Wielandt bound."""
    n = sub.n_letters
    M = np.array(incidence_matrix(sub)) > 0
    P = M.copy()
    bound = max(1, n * n - 2 * n + 2)
    for k in range(1, bound + 1):
        if P.all():
            return True, k
        P = (P.astype(np.int64) @ M.astype(np.int64)) > 0
    return False, None


def wielandt_bound(n):
    return n * n - 2 * n + 2


# ------------------------------------------------------------- iteration

def substitute_pattern(sub, p):
    """ζ(p): the image of each cell j placed at L(j) + F1."""
    out = {}
    F1 = sub.sys.F1
    for j, a in p.cells.items():
        Lj = sub.sys.apply(j)
        r = sub.rules[a]
        for k, f in enumerate(F1):
            out[lat.vadd(Lj, f)] = r[k]
    return Pattern(out)


def iterate(sub, a, n):
    """ζⁿ(a) as a Pattern over Fₙ."""
    if isinstance(a, str):
        a = sub.index[a]
    limits.check("cells", sub.sys.absdet ** n, f"|F_{n}|")
    p = Pattern({(0,) * sub.d: a})
    for _ in range(n):
        p = substitute_pattern(sub, p)
    return p


def power(sub, n):
    """The substitution ζⁿ over (Lⁿ, Fₙ)."""
    Fn = lat.support_iterate(sub.sys, n)
    sysn = lat.ExpansionSystem(lat.mat_pow(sub.sys.L, n), Fn)
    rules = []
    for a in range(sub.n_letters):
        img = iterate(sub, a, n)
        rules.append(tuple(img[p] for p in Fn))
    return Substitution(sysn, sub.alphabet, rules)


# ----------------------------------------------------------------- germs

class GermSeed:
    """A pattern over K fixed by p applications of the germ map."""

    def __init__(self, cells, period, K):
        self.K = tuple(sorted(K))
        self.cells = tuple(cells)   # aligned with sorted K
        self.period = period

    def pattern(self):
        return Pattern(dict(zip(self.K, self.cells)))

    def __eq__(self, other):
        return isinstance(other, GermSeed) and (self.K, self.cells) == (other.K, other.cells)

    def __hash__(self):
        return hash((self.K, self.cells))

    def __repr__(self):
        return f"GermSeed({dict(zip(self.K, self.cells))}, period={self.period})"


def germ_data(sub):
    """Sorted K and, for each k in K, the pair (index of T(k) in K, cell index of its digit)."""
    def go():
        K = sorted(sub.core()["K"])
        pos = {k: i for i, k in enumerate(K)}
        links = []
        for k in K:
            j, f = sub.sys.decompose(k)
            if j not in pos:
                raise InvariantBreach("K is not contained in L(K)+F1")
            links.append((pos[j], sub.cell[f]))
        return K, links
    return sub.cached("germ_data", go)


def germ_map(sub, w):
    """w ↦ ζ(w)|_K for w a tuple aligned with sorted K."""
    _, links = germ_data(sub)
    return tuple(sub.rules[w[i]][h] for i, h in links)


def _germ_cycle(sub, w, p_max):
    seen = [w]
    cur = w
    for _ in range(p_max):
        cur = germ_map(sub, cur)
        if cur == w:
            return seen
        seen.append(cur)
    return None


def _bootstrap_germ(sub):
    """A legal periodic germ, found inside some ζⁿ(a)."""
    K, _ = germ_data(sub)
    prim, _ = is_primitive(sub)
    if not prim:
        raise InvalidSubstitution("substitution is not primitive")
    for n in range(1, 40):
        if sub.sys.absdet ** n > limits.cap("cells"):
            break
        img = iterate(sub, 0, n)
        for t in sorted(img.cells):
            if all(lat.vadd(t, k) in img.cells for k in K):
                w = tuple(img[lat.vadd(t, k)] for k in K)
                break
        else:
            continue
        orbit = [w]
        for _ in range(sub.n_letters ** len(K) + 1):
            w = germ_map(sub, w)
            if w in orbit:
                return orbit[orbit.index(w):]
            orbit.append(w)
    raise IncompleteLanguage("no translate of K found inside the iterates")


def expand_cycle(sub, cycle, points, phase=0):
    """Values of the configuration x^{(phase)} on ``points``.

    ``cycle`` lists germs w_0, ..., w_{p-1} with w_{i+1} = germ_map(w_i);
    x^{(i)} is the configuration with x^{(i)}|_K = w_i and x^{(i+1)} = ζ(x^{(i)}).
    """
    K, _ = germ_data(sub)
    Kset = set(K)
    p = len(cycle)
    levels = []
    cur = set(points)
    while not cur <= Kset:
        step = {q: sub.sys.decompose(q) for q in cur}
        levels.append(step)
        cur = {jf[0] for jf in step.values()}
        if len(levels) > 4096:
            raise InvariantBreach("expansion did not reach K")
    depth = len(levels)
    base = cycle[(phase - depth) % p]
    vals = dict(zip(K, base))
    vals = {q: vals[q] for q in cur}
    rules, cell = sub.rules, sub.cell
    for step in reversed(levels):
        vals = {q: rules[vals[j]][cell[f]] for q, (j, f) in step.items()}
    return Pattern(vals)


def periodic_seeds(sub, p_max=2):
    """All germs over K whose germ-map period is at most p_max and that belong to the language."""
    K, _ = germ_data(sub)
    legal = set(language(sub, K).words)
    seeds = []
    done = set()
    for w in sorted(legal):
        if w in done:
            continue
        cyc = _germ_cycle(sub, w, p_max)
        if cyc is None:
            continue
        for g in cyc:
            done.add(g)
            seeds.append(GermSeed(g, len(cyc), K))
    seeds.sort(key=lambda s: (s.period, s.cells))
    return seeds


def seed_cycle(sub, seed):
    cyc = [seed.cells]
    for _ in range(seed.period - 1):
        cyc.append(germ_map(sub, cyc[-1]))
    return cyc


def expand_seed(sub, seed, window):
    """The ζ^p-fixed configuration generated by ``seed``, restricted to ``window``."""
    limits.check("cells", len(window), "window")
    return expand_cycle(sub, seed_cycle(sub, seed), window, 0)


def box_window(d, radius):
    return lat.box_points(-radius, radius, d)


def window_array(pattern, radius, d):
    """A pattern on ⟦−radius, radius⟧^d as a numpy array (index = point + radius)."""
    shape = (2 * radius + 1,) * d
    arr = np.full(shape, -1, dtype=np.int64)
    for p, a in pattern.cells.items():
        arr[tuple(c + radius for c in p)] = a
    return arr


# -------------------------------------------------------------- language

class LanguageSet:
    """The set of patterns of a subshift with a fixed support."""

    def __init__(self, support, words):
        self.support = list(support)
        self.words = sorted(words)
        self._set = set(self.words)

    def __len__(self):
        return len(self.words)

    def __iter__(self):
        return iter(self.words)

    def __contains__(self, item):
        if isinstance(item, Pattern):
            item = item.as_tuple(self.support)
        return item in self._set

    def patterns(self):
        return [Pattern(dict(zip(self.support, w))) for w in self.words]

    def restrict(self, P):
        idx = [self.support.index(p) for p in sorted(P)]
        return LanguageSet(sorted(P), {tuple(w[i] for i in idx) for w in self.words})


def desub_closure(sys, P):
    """Smallest S ⊇ P with {j : L j + g ∈ F1 + S} ⊆ S.

    For such S, the S-pattern of ζ(x) at any f in F1 is a function of the
    S-pattern of x at 0.
    """
    S = set(P)
    todo = list(S)
    while todo:
        s = todo.pop()
        for f in sys.F1:
            j = sys.decompose(lat.vadd(s, f))[0]
            if j not in S:
                S.add(j)
                todo.append(j)
    return S


def _step_indices(sub, S):
    pos = {s: i for i, s in enumerate(S)}
    out = []
    for f in sub.sys.F1:
        ci, hi = [], []
        for s in S:
            j, h = sub.sys.decompose(lat.vadd(s, f))
            ci.append(pos[j])
            hi.append(sub.cell[h])
        out.append((np.array(ci), np.array(hi)))
    return out


def _closure(sub, S, seeds):
    """Close a set of S-patterns under v ↦ ζ(v)|_{f+S}, f ∈ F1."""
    steps = _step_indices(sub, S)
    dtype = np.uint8 if sub.n_letters < 256 else np.uint16
    table = sub.table.astype(dtype)
    seen = set()
    frontier = []
    for w in seeds:
        b = np.asarray(w, dtype=dtype).tobytes()
        if b not in seen:
            seen.add(b)
            frontier.append(b)
    cap = limits.cap("patterns")
    width = len(S)
    while frontier:
        V = np.frombuffer(b"".join(frontier), dtype=dtype).reshape(-1, width)
        nxt = []
        for ci, hi in steps:
            W = table[V[:, ci], hi]
            for row in W:
                b = row.tobytes()
                if b not in seen:
                    seen.add(b)
                    nxt.append(b)
        if len(seen) > cap:
            raise IncompleteLanguage(f"more than {cap} patterns over a support of size {width}")
        frontier = nxt
    return [tuple(int(x) for x in np.frombuffer(b, dtype=dtype)) for b in seen]


def _cycle_seeds(sub, S):
    """S-patterns of the bootstrap cycle configurations at the points of ball(r̄ + 1)."""
    cycle = _bootstrap_germ(sub)
    centers = sorted(lat.ball_points(sub.sys.r_bar + 1, sub.d))
    window = lat.minkowski(centers, S)
    out = set()
    for phase in range(len(cycle)):
        x = expand_cycle(sub, cycle, window, phase)
        for c in centers:
            out.add(tuple(x[lat.vadd(c, s)] for s in S))
    return out


def language(sub, P):
    """All patterns with support P occurring in the subshift X_ζ.

    The support is enlarged to its closure S under one-step
    desubstitution; the S-patterns are then exactly the closure of the
    S-patterns seen around the origin of one periodic orbit under
    v ↦ ζ(v)|_{f+S}, and the result is their restriction to P. Requires a
    primitive substitution.
    """
    P = sorted({tuple(p) for p in P})
    key = ("lang", tuple(P))
    if key in sub._cache:
        return sub._cache[key]
    S = sorted(desub_closure(sub.sys, P))
    skey = ("lang", tuple(S))
    if skey in sub._cache:
        full = sub._cache[skey]
    else:
        words = _closure(sub, S, _cycle_seeds(sub, S))
        full = LanguageSet(S, words)
        sub._cache[skey] = full
    res = full if S == P else full.restrict(P)
    sub._cache[key] = res
    return res


def language_from_window(pattern, P):
    """P-patterns read off a finite window (an under-approximation used as an oracle)."""
    P = sorted(P)
    out = set()
    cells = pattern.cells
    for c in cells:
        try:
            out.add(tuple(cells[lat.vadd(c, p)] for p in P))
        except KeyError:
            continue
    return out


def complexity(sub, r):
    """p_ζ(r): the number of patterns with support the ball of radius r."""
    return len(language(sub, lat.ball_points(r, sub.d)))


def complexity_exponent(sub):
    """−log|det L| / log‖L⁻¹‖."""
    return -math.log(sub.sys.absdet) / math.log(sub.sys.inv_norm)


def complexity_constant(sub):
    """|A|^{|C+B|} with B the ball of radius r̄."""
    C = sub.core()["C"]
    B = lat.ball_points(sub.sys.r_bar, sub.d)
    return sub.n_letters ** len(lat.minkowski(C, B))


def complexity_bound_holds(sub, r, p=None):
    """p(r) ≤ |A|^{|C+B|} · r^e, compared exactly when e is an integer."""
    if p is None:
        p = complexity(sub, r)
    c = complexity_constant(sub)
    e = complexity_exponent(sub)
    if abs(e - round(e)) < 1e-9:
        return p <= c * r ** int(round(e))
    return math.log(p) <= math.log(c) + e * math.log(max(r, 1))


def _sub_indices(big, small, center):
    pos = {p: i for i, p in enumerate(big)}
    return [pos[lat.vadd(center, q)] for q in small]


def repetitivity_empirical(sub, r, R_max=64):
    """Smallest R such that every ball-R pattern contains every ball-r pattern."""
    small = sorted(lat.ball_points(r, sub.d))
    target = set(language(sub, small).words)
    for R in range(int(math.ceil(r)), R_max + 1):
        big = sorted(lat.ball_points(R, sub.d))
        centers = [c for c in big if all(lat.vadd(c, q) in set(big) for q in small)]
        idx = np.array([_sub_indices(big, small, c) for c in centers])
        words = np.array(language(sub, big).words)
        ok = True
        for w in words:
            found = {tuple(row) for row in w[idx].tolist()}
            if not target <= found:
                ok = False
                break
        if ok:
            return R
    return None


def repetitivity_bound_log10(sub, r):
    """log10 of (2‖F1‖ + ‖L‖^{|A|²+(|A|+1)^{(6r̄)^d}}(2‖F1‖+d)) · r^t."""
    sys = sub.sys
    A = sub.n_letters
    F1n = lat.set_norm(sys.F1)
    t = -math.log(sys.mat_norm) / math.log(sys.inv_norm)
    E = A * A + (A + 1) ** ((6 * sys.r_bar) ** sys.d)
    big = E * math.log10(sys.mat_norm) + math.log10(2 * F1n + sys.d)
    val = big + math.log10(1 + 2 * F1n / 10 ** min(big, 300))
    return val + t * math.log10(r) if r > 0 else val


def repetitivity(sub, r, R_max=64):
    return repetitivity_empirical(sub, r, R_max), repetitivity_bound_log10(sub, max(r, 1))


def aperiodicity_scan(sub, window_radius=16, period_bound=8, seed=None):
    """Nonzero vectors p, ‖p‖ ≤ period_bound, with x_{n+p} = x_n across an expanded window."""
    if seed is None:
        seed = periodic_seeds(sub, 2)[0] if periodic_seeds(sub, 2) else None
    if seed is None:
        seeds = periodic_seeds(sub, sub.n_letters ** len(germ_data(sub)[0]))
        seed = seeds[0]
    x = expand_seed(sub, seed, box_window(sub.d, window_radius))
    arr = window_array(x, window_radius, sub.d)
    periods = []
    for p in sorted(lat.ball_points(period_bound, sub.d)):
        if not any(p):
            continue
        src = tuple(slice(max(0, -c), arr.shape[i] - max(0, c)) for i, c in enumerate(p))
        dst = tuple(slice(max(0, c), arr.shape[i] - max(0, -c)) for i, c in enumerate(p))
        if np.array_equal(arr[src], arr[dst]):
            periods.append(p)
    return {"window_radius": window_radius, "period_bound": period_bound,
            "periods": periods, "heuristic": True}


def repulsion_check(sub, pattern, R_of):
    """No two occurrences j1 ≠ j2 of a ball pattern of radius R_of(‖j1−j2‖) in a window."""
    cells = pattern.cells
    pts = sorted(cells)
    radius = max(max(abs(c) for c in p) for p in pts)
    for j1 in pts:
        for j2 in pts:
            if j1 >= j2:
                continue
            dist = math.sqrt(lat.norm_sq(lat.vsub(j1, j2)))
            R = R_of(dist)
            ball = lat.ball_points(R, sub.d)
            a = [lat.vadd(j1, q) for q in ball]
            b = [lat.vadd(j2, q) for q in ball]
            if not all(p in cells for p in a + b):
                continue
            if all(cells[p] == cells[q] for p, q in zip(a, b)):
                return False, (j1, j2)
    return True, None


__all__ = ["Pattern", "Substitution", "GermSeed", "LanguageSet", "validate",
           "incidence_matrix", "is_primitive", "iterate", "substitute_pattern",
           "power", "periodic_seeds", "expand_seed", "expand_cycle", "germ_map",
           "language", "complexity", "repetitivity", "aperiodicity_scan",
           "product"]

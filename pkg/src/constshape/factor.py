"""Block maps between substitutive subshifts.

A block map with support P sends x to the configuration n ↦ Φ(x|_{n+P}).
Tables are keyed by tuples of source letter ids aligned with the support
order. Commutation S^f φ ζ₁ⁿ = ζ₂ⁿ φ is verified exactly: every source
pattern needed to evaluate both sides at one block of ζ₂ⁿ is drawn from the
enumerated language, so a pass is a proof for the whole subshift.
"""

import math
from dataclasses import dataclass, field

from . import lattice as lat
from . import limits
from .errors import (InvariantBreach, MissingTableEntry, NotCertified,
                     ResourceLimit, UsageError)
from .substitution import (Pattern, box_window, expand_seed, iterate,
                           language, periodic_seeds)


def words_on(sub, P):
    """Language words over P, aligned with the order of P (not sorted)."""
    L = language(sub, P)
    P = [tuple(p) for p in P]
    if L.support == P:
        return L.words
    idx = [L.support.index(p) for p in P]
    return [tuple(w[i] for i in idx) for w in L.words]


class BlockMap:
    def __init__(self, source, target, support, table):
        self.source = source          # source alphabet (names)
        self.target = target          # target alphabet (names)
        self.support = [tuple(p) for p in support]
        self.table = dict(table)      # tuple of source ids -> target id
        d = len(self.support[0])
        if len(set(self.support)) != len(self.support):
            raise UsageError("repeated point in block-map support")
        self.d = d

    def __repr__(self):
        return f"BlockMap(support={self.support}, entries={len(self.table)})"

    @property
    def radius(self):
        return math.sqrt(lat.set_norm_sq(self.support))

    def __call__(self, word):
        try:
            return self.table[tuple(word)]
        except KeyError:
            raise MissingTableEntry(f"no table entry for {tuple(word)}") from None

    def same_table(self, other):
        return (self.support == other.support and self.table == other.table)

    def translate_support(self, t):
        """The map S^{-t} φ: its support is shifted by t."""
        return BlockMap(self.source, self.target,
                        [lat.vadd(p, t) for p in self.support], self.table)

    def apply(self, pattern):
        """φ on a finite pattern; output at n whenever n + P lies in the pattern."""
        cells = pattern.cells
        out = {}
        P = self.support
        for n in cells:
            try:
                w = tuple(cells[lat.vadd(n, p)] for p in P)
            except KeyError:
                continue
            out[n] = self(w)
        return Pattern(out)

    def to_doc(self, source_name=None, target_name=None):
        rows = [[[self.source[a] for a in k], self.target[v]]
                for k, v in sorted(self.table.items())]
        return {"source": source_name, "target": target_name,
                "support": [list(p) for p in self.support], "table": rows}

    @classmethod
    def from_doc(cls, doc, source_sub, target_sub):
        from .errors import SchemaError
        for key in ("support", "table"):
            if key not in doc:
                raise SchemaError(f"{key}: missing field")
        table = {}
        for i, row in enumerate(doc["table"]):
            if not isinstance(row, list) or len(row) != 2:
                raise SchemaError(f"table[{i}]: expected [pattern, symbol]")
            pat, sym = row
            if len(pat) != len(doc["support"]):
                raise SchemaError(f"table[{i}]: pattern length differs from support")
            try:
                key = tuple(source_sub.index[s] for s in pat)
                table[key] = target_sub.index[sym]
            except KeyError as e:
                raise SchemaError(f"table[{i}]: unknown symbol {e.args[0]!r}") from None
        return cls(source_sub.alphabet, target_sub.alphabet,
                   [tuple(p) for p in doc["support"]], table)

    @classmethod
    def letter_map(cls, source_sub, target_sub, mapping):
        """Letter-to-letter map from a dict of names."""
        d = source_sub.d
        table = {(source_sub.index[a],): target_sub.index[b] for a, b in mapping.items()}
        return cls(source_sub.alphabet, target_sub.alphabet, [(0,) * d], table)


def identity_map(sub):
    return BlockMap(sub.alphabet, sub.alphabet, [(0,) * sub.d],
                    {(a,): a for a in range(sub.n_letters)})


def apply_block_map(bm, pattern):
    return bm.apply(pattern)


# ------------------------------------------------------------ commutation

def _power_data(sub, n):
    """(Lⁿ, Fₙ) system and the images ζⁿ(a) as dicts, cached on the substitution."""
    def go():
        sysn = lat.ExpansionSystem(lat.mat_pow(sub.sys.L, n), lat.support_iterate(sub.sys, n))
        imgs = [iterate(sub, a, n).cells for a in range(sub.n_letters)]
        return sysn, imgs
    return sub.cached(("power", n), go)


def commutation_plan(bm, sub1, sub2, f, n):
    """The support Q and, for each target cell g ∈ F₂ₙ, the source reads.

    Position Lⁿm + g of ζ₂ⁿ(φ(x)) equals ζ₂ⁿ(Φ(x|_{m+P}))_g. On the other
    side, cell q ∈ g + f + P of ζ₁ⁿ(x) shifted by Lⁿm is ζ₁ⁿ(x_{m+c})_h with
    q = Lⁿc + h, h ∈ F₁ₙ. Q collects P and all those c.
    """
    sys1, _ = _power_data(sub1, n)
    sys2, _ = _power_data(sub2, n)
    reads = []
    Q = set(bm.support)
    for g in sys2.F1:
        row = []
        for p in bm.support:
            c, h = sys1.decompose(lat.vadd(lat.vadd(g, f), p))
            Q.add(c)
            row.append((c, h))
        reads.append((g, row))
    return sorted(Q), reads


def verify_commutation(bm, sub1, sub2, f, n, detail=False):
    """Exact check of S^f φ ζ₁ⁿ = ζ₂ⁿ φ on all of X_{ζ₁}."""
    f = tuple(f)
    if sub1.sys.L != sub2.sys.L:
        raise UsageError("block-map commutation needs a common expansion matrix")
    Q, reads = commutation_plan(bm, sub1, sub2, f, n)
    L1 = language(sub1, Q)
    pos = {q: i for i, q in enumerate(Q)}
    Pidx = [pos[p] for p in bm.support]
    _, img1 = _power_data(sub1, n)
    _, img2 = _power_data(sub2, n)
    plan = [(g, [(pos[c], h) for c, h in row]) for g, row in reads]
    for w in L1.words:
        u = tuple(w[i] for i in Pidx)
        if u not in bm.table:
            raise MissingTableEntry(f"no table entry for {u}")
        rhs = img2[bm.table[u]]
        for g, row in plan:
            v = tuple(img1[w[i]][h] for i, h in row)
            val = bm.table.get(v)
            if val is None:
                raise MissingTableEntry(f"no table entry for {v}")
            if val != rhs[g]:
                if detail:
                    return False, {"pattern": w, "cell": g}
                return False
    return (True, None) if detail else True


def legality_radius(sub2, f, n):
    """Radius of the region around the origin whose image must be legal.

    If S^f y = ζ₂ⁿ(y), every pattern of y is a subpattern of some ζ₂^{nk}
    image of y restricted to this ball.
    """
    q = sub2.sys.inv_norm ** n
    fn = math.sqrt(lat.norm_sq(f))
    return sub2.sys.r_bar + fn * q / (1 - q) + 1


def image_is_legal(bm, sub1, sub2, radius):
    """Φ maps source patterns over D+P to target-language patterns over D, D = ball(radius)."""
    D = sorted(lat.ball_points(radius, sub1.d))
    DP = sorted(lat.minkowski(D, bm.support))
    L1 = language(sub1, DP)
    L2 = language(sub2, D)
    pos = {q: i for i, q in enumerate(DP)}
    idx = [[pos[lat.vadd(c, p)] for p in bm.support] for c in D]
    for w in L1.words:
        img = tuple(bm(tuple(w[i] for i in row)) for row in idx)
        if img not in L2:
            return False
    return True


@dataclass
class FactorCertificate:
    map: BlockMap
    n: int
    f: tuple
    verified_window: float
    method: str = "language"
    notes: list = field(default_factory=list)

    def to_doc(self, source_name=None, target_name=None):
        import hashlib
        import json
        doc = {"map": self.map.to_doc(source_name, target_name), "n": self.n,
               "f": list(self.f), "window": self.verified_window,
               "method": self.method}
        doc["hash"] = hashlib.sha256(json.dumps(doc["map"], sort_keys=True).encode()).hexdigest()
        return doc


def certify_factor(bm, sub1, sub2, budget=3, shifts=None):
    """Find (n, f), f ∈ Fₙ of the target, with S^f φ ζ₁ⁿ = ζ₂ⁿ φ; also check that images are legal."""
    for n in range(1, budget + 1):
        sys2, _ = _power_data(sub2, n)
        cands = shifts if shifts is not None else sorted(sys2.F1, key=lambda v: (lat.norm_sq(v), v))
        for f in cands:
            try:
                ok = verify_commutation(bm, sub1, sub2, f, n)
            except MissingTableEntry:
                ok = False
            if ok:
                rad = legality_radius(sub2, f, n)
                if not image_is_legal(bm, sub1, sub2, rad):
                    continue
                return FactorCertificate(bm, n, tuple(f), rad)
    raise NotCertified(f"no (n, f) with n <= {budget} passed")


# ------------------------------------------------------------------ search

def _constraints(sub1, sub2, support, f, n):
    """Edges u -> (v, g): value(v) must be ζ₂ⁿ(value(u))_g."""
    probe = BlockMap(sub1.alphabet, sub2.alphabet, support, {})
    Q, reads = commutation_plan(probe, sub1, sub2, f, n)
    L1 = language(sub1, Q)
    pos = {q: i for i, q in enumerate(Q)}
    Pidx = [pos[p] for p in support]
    _, img1 = _power_data(sub1, n)
    plan = [(g, [(pos[c], h) for c, h in row]) for g, row in reads]
    edges = {}
    for w in L1.words:
        u = tuple(w[i] for i in Pidx)
        lst = edges.setdefault(u, set())
        for g, row in plan:
            v = tuple(img1[w[i]][h] for i, h in row)
            lst.add((v, g))
            edges.setdefault(v, set())
    return {u: sorted(e) for u, e in edges.items()}


def _propagate(assign, edges, img2, u, val):
    todo = [(u, val)]
    while todo:
        u, val = todo.pop()
        cur = assign.get(u)
        if cur is not None:
            if cur != val:
                return False
            continue
        assign[u] = val
        for v, g in edges[u]:
            req = img2[val][g]
            have = assign.get(v)
            if have is None:
                todo.append((v, req))
            elif have != req:
                return False
    return True


def _solve(edges, domain, img2, n_target, out, limit):
    """All total assignments of domain entries consistent with the edges."""
    order = sorted(domain)

    def rec(assign, k):
        while k < len(order) and order[k] in assign:
            k += 1
        if k == len(order):
            out.append(dict(assign))
            if len(out) > limit:
                raise ResourceLimit("too many solutions")
            return
        u = order[k]
        for b in range(n_target):
            trial = dict(assign)
            if _propagate(trial, edges, img2, u, b):
                rec(trial, k + 1)

    rec({}, 0)


def search_factors(sub1, sub2, support, n_max=2, shifts=None, limit=10_000):
    """All block maps with the given support satisfying S^f φ ζ₁ⁿ = ζ₂ⁿ φ for some n ≤ n_max, f ∈ Fₙ.

    Backtracking over table entries; each assignment forces the entries
    reached through the commutation constraints. Results are certified
    (commutation plus image legality) and deduplicated by table; maps that
    differ by a shift are kept separately here and merged by
    ``classes_modulo_shift``.
    """
    support = [tuple(p) for p in support]
    domain = set(words_on(sub1, support))
    limits.check("table", len(domain), "block-map table domain")
    found = []
    seen = set()
    for n in range(1, n_max + 1):
        sys2, img2 = _power_data(sub2, n)
        cands = shifts if shifts is not None else sorted(sys2.F1, key=lambda v: (lat.norm_sq(v), v))
        for f in cands:
            f = tuple(f)
            edges = _constraints(sub1, sub2, support, f, n)
            sols = []
            _solve(edges, domain, img2, sub2.n_letters, sols, limit)
            for s in sols:
                table = {u: s[u] for u in domain}
                key = tuple(sorted(table.items()))
                if key in seen:
                    continue
                bm = BlockMap(sub1.alphabet, sub2.alphabet, support, table)
                if not image_is_legal(bm, sub1, sub2, legality_radius(sub2, f, n)):
                    continue
                seen.add(key)
                found.append(FactorCertificate(bm, n, f, legality_radius(sub2, f, n),
                                               notes=["found by search"]))
    return found


# ---------------------------------------------------------- composition

def compose(outer, inner, sub_source):
    """outer ∘ inner as a block map on the source subshift of ``inner``."""
    S = sorted(lat.minkowski(outer.support, inner.support))
    L = language(sub_source, S)
    pos = {p: i for i, p in enumerate(S)}
    idx = [[pos[lat.vadd(q, p)] for p in inner.support] for q in outer.support]
    table = {}
    for w in L.words:
        mid = tuple(inner(tuple(w[i] for i in row)) for row in idx)
        table[w] = outer(mid)
    return BlockMap(inner.source, outer.target, S, table)


def equal_maps(a, b, sub_source):
    """Extensional equality on X_{source}."""
    S = sorted(set(a.support) | set(b.support))
    L = language(sub_source, S)
    pos = {p: i for i, p in enumerate(S)}
    ia = [pos[p] for p in a.support]
    ib = [pos[p] for p in b.support]
    return all(a(tuple(w[i] for i in ia)) == b(tuple(w[i] for i in ib)) for w in L.words)


def shift_amount(bm, sub):
    """m with φ(x)_n = x_{n+m} on X, or None."""
    if list(bm.source) != list(bm.target):
        return None
    words = words_on(sub, bm.support)
    for k, m in enumerate(bm.support):
        if all(bm(w) == w[k] for w in words):
            return m
    return None


def minimize_support(bm, sub):
    """Drop support points the table does not depend on, farthest first.

    On a subshift the minimal support need not be unique, since cells can
    be functions of other cells; the result is one deterministic choice.
    """
    cur = bm
    for p in sorted(bm.support, key=lambda v: (-lat.norm_sq(v), v)):
        if len(cur.support) == 1:
            break
        keep = [q for q in cur.support if q != p]
        idx = [cur.support.index(q) for q in keep]
        table = {}
        ok = True
        for w in words_on(sub, cur.support):
            key = tuple(w[i] for i in idx)
            val = cur(w)
            if table.setdefault(key, val) != val:
                ok = False
                break
        if ok:
            cur = BlockMap(cur.source, cur.target, keep, table)
    return cur


def shift_equivalent(a, b, sub):
    """t with b = S^t a on X (b(x)_n = a(x)_{n+t}), or None."""
    reach = int(a.radius + b.radius) + 1
    for t in sorted(lat.box_points(-reach, reach, sub.d), key=lambda v: (lat.norm_sq(v), v)):
        if equal_maps(a.translate_support(t), b, sub):
            return t
    return None


def normalize_support(bm, sub):
    """Minimal support shifted so that its least point is 0 (the map changes by a shift)."""
    m = minimize_support(bm, sub)
    return m.translate_support(lat.vneg(min(m.support)))


def classes_modulo_shift(certs, sub):
    reps = []
    for c in certs:
        if not any(shift_equivalent(r.map, c.map, sub) is not None for r in reps):
            reps.append(c)
    return reps


# ---------------------------------------------------------- renormalization

def renormalize_step(bm, sub1, sub2):
    """(g, φ₁) with S^g φ ζ₁ = ζ₂ φ₁, g ∈ F1 of the target.

    Needs ζ₂ injective on letters: then φ₁(x)_0 is the unique letter b with
    ζ₂(b) = (φ ζ₁ x)|_{g+F1}.
    """
    inv = {}
    for b, r in enumerate(sub2.rules):
        if r in inv:
            raise UsageError("renormalization needs a target substitution injective on letters")
        inv[r] = b
    F2 = sub2.sys.F1
    for g in sorted(F2, key=lambda v: (lat.norm_sq(v), v)):
        cells = [lat.vadd(g, h) for h in F2]
        need = set()
        plan = []
        for q in cells:
            row = []
            for p in bm.support:
                c, h = sub1.sys.decompose(lat.vadd(q, p))
                need.add(c)
                row.append((c, sub1.cell[h]))
            plan.append(row)
        Q = sorted(need)
        pos = {c: i for i, c in enumerate(Q)}
        plan = [[(pos[c], h) for c, h in row] for row in plan]
        table = {}
        ok = True
        for w in language(sub1, Q).words:
            block = tuple(bm(tuple(sub1.rules[w[i]][h] for i, h in row)) for row in plan)
            b = inv.get(block)
            if b is None:
                ok = False
                break
            table[w] = b
        if ok:
            phi1 = BlockMap(bm.source, bm.target, Q, table)
            return g, minimize_support(phi1, sub1)
    raise NotCertified("no shift g in F1 makes φζ₁ a ζ₂-image")


@dataclass
class Renormalization:
    maps: list
    shifts: list
    cycle_start: int
    cycle_length: int
    psi: BlockMap
    level: int
    f: tuple
    verified: bool

    def radii(self):
        return [m.radius for m in self.maps]


def renormalize(cert, sub1, sub2, max_steps=12):
    """φ₀ = φ, φ_{k+1} = (φ_k)₁ until φ_m = φ_{m+k}; returns ψ = φ_m with its commutation data."""
    maps = [minimize_support(cert.map, sub1)]
    shifts = []
    for _ in range(max_steps):
        g, nxt = renormalize_step(maps[-1], sub1, sub2)
        shifts.append(g)
        for i, old in enumerate(maps):
            if equal_maps(old, nxt, sub1):
                k = len(maps) - i
                psi = maps[i]
                f = (0,) * sub1.d
                P = lat.mat_pow(sub1.sys.L, 0)
                for gi in shifts[i:i + k]:
                    f = lat.vadd(f, lat.mat_vec(P, gi))
                    P = lat.mat_mul(sub1.sys.L, P)
                ok = verify_commutation(psi, sub1, sub2, f, k)
                return Renormalization(maps, shifts, i, k, psi, k, f, ok)
        maps.append(nxt)
    raise NotCertified(f"no cycle within {max_steps} renormalization steps")


# ---------------------------------------------------------------- conjugacy

@dataclass
class ConjugacyVerdict:
    conjugate: bool
    forward: BlockMap
    inverse: BlockMap = None
    method: str = ""
    power: int = 0
    shift: tuple = None
    notes: list = field(default_factory=list)


def map_power(bm, k, sub):
    out = bm
    for _ in range(k - 1):
        out = compose(bm, out, sub)
    return out


def coalescence_inverse(bm, sub, max_power=12):
    """For an endomorphism ψ find k, m with ψ^k = S^m; the inverse is S^{-m}ψ^{k-1}."""
    cur = bm
    for k in range(1, max_power + 1):
        m = shift_amount(cur, sub)
        if m is not None:
            if k == 1:
                inv = BlockMap(bm.target, bm.source, [lat.vneg(m)],
                               {(a,): a for a in range(len(bm.source))})
            else:
                inv = map_power(bm, k - 1, sub).translate_support(lat.vneg(m))
            return k, m, minimize_support(inv, sub)
        cur = compose(bm, cur, sub)
    return None


def check_inverse_pair(fwd, bwd, sub1, sub2):
    """bwd ∘ fwd = shift on X₁ and fwd ∘ bwd = shift on X₂; returns the two shifts or None."""
    m1 = shift_amount(compose(bwd, fwd, sub1), sub1)
    m2 = shift_amount(compose(fwd, bwd, sub2), sub2)
    return m1, m2


def check_conjugacy(cert, sub1, sub2, budget=2, inverse=None):
    """Decide invertibility of a certified factor by finding an inverse block map."""
    bm = cert.map if isinstance(cert, FactorCertificate) else cert
    if sub1 == sub2:
        res = coalescence_inverse(bm, sub1)
        if res is None:
            return ConjugacyVerdict(False, bm, method="coalescence",
                                    notes=["no power of the map is a shift within the budget"])
        k, m, inv = res
        return ConjugacyVerdict(True, bm, inv, "coalescence", k, m)
    if inverse is not None:
        m1, m2 = check_inverse_pair(bm, inverse, sub1, sub2)
        ok = m1 is not None and m2 is not None
        return ConjugacyVerdict(ok, bm, inverse if ok else None, "given inverse", 1, m1,
                                notes=[f"shifts {m1}, {m2}"])
    radii = sorted({lat.norm_sq(p) for p in lat.box_points(-budget, budget, sub1.d)})
    for r2 in radii:
        support = sorted(lat.ball_points(math.sqrt(r2), sub1.d))
        try:
            cands = search_factors(sub2, sub1, support, n_max=2)
        except ResourceLimit:
            break
        for c in cands:
            m1, m2 = check_inverse_pair(bm, c.map, sub1, sub2)
            if m1 is not None and m2 is not None:
                return ConjugacyVerdict(True, bm, c.map, "inverse search", 1, m1)
    return ConjugacyVerdict(False, bm, method="inverse search",
                            notes=["unknown: no inverse within the searched radius"])


def automorphism_census(sub, support=None, n_max=2):
    """Automorphisms with the given support, one representative per class modulo shifts."""
    if support is None:
        support = [(0,) * sub.d]
    certs = search_factors(sub, sub, support, n_max)
    auts = []
    for c in certs:
        v = check_conjugacy(c, sub, sub)
        if v.conjugate:
            auts.append(c)
    return classes_modulo_shift(auts, sub)


# ------------------------------------------------------------ factorization

@dataclass
class FactorizationVerdict:
    answer: str                   # "yes", "no" or "unknown"
    certificate: FactorCertificate = None
    searched_radius: float = 0.0
    note: str = ""


def decide_factorization(sub1, sub2, budget=2, n_max=2):
    """Search factor maps of growing radius; 'no' is never claimed below the theorem's radius."""
    if sub1.sys.L != sub2.sys.L:
        raise UsageError("substitutions must share the expansion matrix")
    radii = sorted({lat.norm_sq(p) for p in lat.box_points(-budget, budget, sub1.d)
                    if lat.norm_sq(p) <= budget * budget})
    searched = 0.0
    for r2 in radii:
        support = sorted(lat.ball_points(math.sqrt(r2), sub1.d))
        try:
            certs = search_factors(sub1, sub2, support, n_max)
        except ResourceLimit:
            break
        searched = math.sqrt(r2)
        if certs:
            best = classes_modulo_shift(certs, sub1)[0]
            return FactorizationVerdict("yes", best, searched)
    return FactorizationVerdict(
        "unknown", None, searched,
        "the sound search radius 2r̄+R+1 with the formula constant R is astronomically large; "
        "only radii up to the budget were searched")


# ---------------------------------------------------------- invariant orbits

def _twisted_germs(sub, p, j):
    """Legal configurations x with ζ^p(x) = S^j x, described by their germs on the cycle set."""
    sysp, imgp = _power_data(sub, p)
    M = [[sysp.L[i][k] - (i == k) for k in range(sub.d)] for i in range(sub.d)]

    def T(q):
        m, h = sysp.decompose(lat.vsub(q, j))
        return m, h
    q_inv = sysp.inv_norm
    rho = (math.sqrt(float(sysp.inv_F1_norm_sq)) +
           math.sqrt(float(sysp.inv_norm_sq_of(j)))) / (1 - q_inv) + 1
    ball = lat.ball_points(rho, sub.d)
    per = set()
    for x in sorted(ball):
        y, seen = x, []
        while y not in seen and len(seen) <= len(ball):
            seen.append(y)
            y = T(y)[0]
        if y == x:
            per.add(x)
    Kj = sorted(per)
    links = [T(k) for k in Kj]
    pos = {k: i for i, k in enumerate(Kj)}
    legal = language(sub, Kj)
    out = []
    for w in legal.words:
        img = tuple(imgp[w[pos[m]]][h] for m, h in links)
        if img == w:
            out.append(w)
    return Kj, links, out, M


def _expand_twisted(sub, p, j, Kj, germ, window):
    sysp, imgp = _power_data(sub, p)
    vals = dict(zip(Kj, germ))
    out = {}
    for q in window:
        chain = []
        y = q
        while y not in vals:
            m, h = sysp.decompose(lat.vsub(y, j))
            chain.append(h)
            y = m
        a = vals[y]
        for h in reversed(chain):
            a = imgp[a][h]
        out[q] = a
    return Pattern(out)


def _residue_reps(M, count, d, radius=6):
    adj = lat.adjugate(M)
    D = abs(lat.det(M))
    reps = {}
    for v in sorted(lat.box_points(-radius, radius, d), key=lambda v: (lat.norm_sq(v), v)):
        key = tuple(x % D for x in lat.mat_vec(adj, v))
        reps.setdefault(key, v)
        if len(reps) == count:
            break
    return sorted(reps.values(), key=lambda v: (lat.norm_sq(v), v))


def invariant_orbit_scan(sub, p_max=2, window_radius=8, shift_radius=3):
    """Solutions of ζ^p(x) = S^j x, p ≤ p_max, grouped into shift orbits."""
    results = []
    win = sorted(box_window(sub.d, window_radius))
    for p in range(1, p_max + 1):
        sysp, _ = _power_data(sub, p)
        M = tuple(tuple(sysp.L[i][k] - (i == k) for k in range(sub.d)) for i in range(sub.d))
        count = abs(lat.det(M))
        for j in _residue_reps(M, count, sub.d):
            Kj, _, germs, _ = _twisted_germs(sub, p, j)
            for g in germs:
                x = _expand_twisted(sub, p, j, Kj, g, win)
                results.append({"p": p, "j": j, "support": Kj, "germ": g, "window": x})
    # merge into orbits by shift comparison on the windows
    orbits = []
    for r in results:
        for o in orbits:
            if o["p"] == r["p"] and _shift_equal(o["window"], r["window"], shift_radius):
                o["members"].append(r)
                break
        else:
            orbits.append({"p": r["p"], "window": r["window"], "members": [r]})
    return {"solutions": results, "orbits": orbits}


def _shift_equal(x, y, radius):
    cx, cy = x.cells, y.cells
    d = len(next(iter(cx)))
    for t in lat.box_points(-radius, radius, d):
        common = [q for q in cx if lat.vadd(q, t) in cy]
        if common and all(cx[q] == cy[lat.vadd(q, t)] for q in common):
            return True
    return False


__all__ = ["BlockMap", "FactorCertificate", "identity_map", "apply_block_map",
           "verify_commutation", "certify_factor", "search_factors", "compose",
           "renormalize", "check_conjugacy", "automorphism_census",
           "decide_factorization", "invariant_orbit_scan", "periodic_seeds",
           "expand_seed", "InvariantBreach"]

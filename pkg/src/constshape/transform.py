"""Rewrites of a substitution that keep the subshift up to conjugacy:
powers, a change of fundamental domain and injectivization."""

from dataclasses import dataclass, field

from . import coreset
from . import lattice as lat
from .errors import InvariantBreach, NotFolner
from .factor import BlockMap, words_on
from .folner import decide_folner
from .substitution import (Pattern, Substitution, box_window, expand_seed,
                           language, periodic_seeds, power, substitute_pattern)


@dataclass
class ConjugacyPair:
    forward: BlockMap
    backward: BlockMap = None
    verified_window: int = 0
    checks: dict = field(default_factory=dict)


def _interior(window, radius, margin):
    return [p for p in window if max(abs(c) for c in p) <= radius - margin]


# ----------------------------------------------------------- support change

def change_support(sub, G1, window_radius=16):
    """A substitution over (L, G1) conjugate to ``sub``.

    B = K₂ + A where K₂ is the remainder set of (L, G1) and A the least
    fixpoint of A ↦ L⁻¹(A + G1 + G1 − F1). The new letters are the
    B-patterns of X_ζ in sorted order, and ζ̃(w)_g = ζ(w)|_{g+B}. The forward
    map codes x by its B-patterns; the backward map reads the letter at 0.
    """
    G1 = [tuple(g) for g in G1]
    if set(G1) == set(sub.sys.F1):
        ident = BlockMap(sub.alphabet, sub.alphabet, [(0,) * sub.d],
                         {(a,): a for a in range(sub.n_letters)})
        return sub, ConjugacyPair(ident, ident, 0, {"shortcut": True})
    gsys = lat.ExpansionSystem(sub.sys.L, G1)
    for name, s in (("F", sub.sys), ("G", gsys)):
        if not decide_folner(s).is_folner:
            raise NotFolner(f"the support sequence ({name}_n) is not Følner")
    K2, _ = coreset.compute_K(gsys)
    A = coreset.compute_A_supportchange(sub.sys, G1)
    B = sorted(lat.minkowski(K2, A))
    words = language(sub, B).words           # sorted, aligned with sorted B
    letter = {w: i for i, w in enumerate(words)}
    pos = {b: i for i, b in enumerate(B)}
    rules = []
    for w in words:
        img = substitute_pattern(sub, Pattern(dict(zip(B, w)))).cells
        row = []
        for g in G1:
            try:
                u = tuple(img[lat.vadd(g, b)] for b in B)
            except KeyError:
                raise InvariantBreach(f"g + B not covered by ζ(B) for g={g}") from None
            if u not in letter:
                raise InvariantBreach("ζ̃ produced a pattern outside the language")
            row.append(letter[u])
        rules.append(tuple(row))
    names = [str(i) for i in range(len(words))]
    new = Substitution(gsys, names, rules)
    forward = BlockMap(sub.alphabet, names, B, {w: letter[w] for w in words})
    zero = pos[(0,) * sub.d]
    backward = BlockMap(names, sub.alphabet, [(0,) * sub.d],
                        {(letter[w],): w[zero] for w in words})
    pair = ConjugacyPair(forward, backward, window_radius)
    pair.checks = verify_pair_on_window(sub, new, pair, window_radius)
    pair.checks["B"] = B
    pair.checks["A"] = sorted(A)
    pair.checks["K2"] = sorted(K2)
    if not pair.checks["roundtrip"] or not pair.checks["seed_transport"]:
        raise InvariantBreach("support-change conjugacy failed its window check")
    return new, pair


def verify_pair_on_window(sub, new, pair, radius):
    """ψ∘φ = id on an expanded seed window, and φ sends ζ^p-fixed seeds to ζ̃^p-fixed patterns."""
    win = sorted(box_window(sub.d, radius))
    margin = int(lat.set_norm(pair.forward.support)) + 1
    seeds = periodic_seeds(sub)
    checks = {"roundtrip": True, "seed_transport": True, "seeds": len(seeds)}
    for s in seeds:
        x = expand_seed(sub, s, win)
        y = pair.forward.apply(x)
        z = pair.backward.apply(y)
        for q in _interior(win, radius, margin):
            if z.cells.get(q) != x.cells[q]:
                checks["roundtrip"] = False
        # ζ̃^p(y) agrees with y wherever it is defined from inside the window
        img = y
        for _ in range(s.period):
            img = substitute_pattern(new, img)
        for q in _interior(win, radius, margin):
            if q in img.cells and q in y.cells and img.cells[q] != y.cells[q]:
                checks["seed_transport"] = False
    return checks


# ---------------------------------------------------------- injectivization

def injectivize(sub):
    """Merge letters with equal images until ζ is injective on letters.

    Each step maps a to the first letter with the same image and rebuilds
    the rules so that ζ̃∘Φ = Φ∘ζ. Returns the result, the composed
    letter-to-letter coding as a ConjugacyPair (forward only) and the
    list of steps.
    """
    coding = list(range(sub.n_letters))       # original letter -> current id
    cur = sub
    steps = []
    while True:
        first = {}
        phi = []
        for a, r in enumerate(cur.rules):
            phi.append(first.setdefault(r, len(first)))
        if len(first) == cur.n_letters:
            break
        reps = {}
        for a, b in enumerate(phi):
            reps.setdefault(b, a)
        names = [cur.alphabet[reps[b]] for b in range(len(first))]
        rules = [tuple(phi[c] for c in cur.rules[reps[b]]) for b in range(len(first))]
        merged = [[cur.alphabet[a] for a in range(cur.n_letters) if phi[a] == b]
                  for b in range(len(first))]
        steps.append({"merged": [m for m in merged if len(m) > 1],
                      "letters": len(first)})
        cur = Substitution(cur.sys, names, rules)
        coding = [phi[c] for c in coding]
    forward = BlockMap(sub.alphabet, cur.alphabet, [(0,) * sub.d],
                       {(a,): coding[a] for a in range(sub.n_letters)})
    return cur, ConjugacyPair(forward), steps


def cascade_example():
    """A 1-D substitution whose injectivization needs three merges."""
    sys = lat.ExpansionSystem([[2]], [(0,), (1,)])
    rules = {"a": "ab", "c": "ab", "b": "ae", "d": "ce", "e": "bf", "g": "df", "f": "ga"}
    alphabet = ["a", "b", "c", "d", "e", "f", "g"]
    return Substitution(sys, alphabet, {k: list(v) for k, v in rules.items()})


__all__ = ["ConjugacyPair", "power", "change_support", "injectivize",
           "cascade_example", "verify_pair_on_window", "words_on"]

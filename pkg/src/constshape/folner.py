"""The graph G(L, F1, B) and the decision of the Følner property.

States are the points of C+B, letters the points of F1, and a -f-> b when
f + a = L(b) + g for some g in F1. The zero state is a sink. A word labels
paths from every state to 0 exactly when its value f = Σ L^i f_i satisfies
f + C + B ⊆ Fₙ, and such a word exists exactly when (Fₙ) is Følner.
"""

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction

from . import coreset
from . import lattice as lat
from . import limits
from .errors import BadB, InvariantBreach, ResourceLimit

EXACT_STATE_GATE = 22


@dataclass
class SyncGraph:
    states: list
    alphabet: list
    delta: list          # delta[state index][letter index] -> state index
    zero_state: tuple
    index: dict = field(repr=False, default_factory=dict)

    @property
    def zero(self):
        return self.index[self.zero_state]

    def step(self, state, letter):
        return self.states[self.delta[self.index[state]][self.alphabet.index(letter)]]

    def run(self, state, word):
        for f in word:
            state = self.step(state, f)
        return state

    def edges(self):
        for i, a in enumerate(self.states):
            for k, f in enumerate(self.alphabet):
                yield a, f, self.states[self.delta[i][k]]

    def edge_list(self):
        """Edges as lines 'state -[letter]-> state'."""
        return [f"{_fmt(a)} -[{_fmt(f)}]-> {_fmt(b)}" for a, f, b in self.edges()]

    def to_dot(self):
        lines = ["digraph G {"]
        for a in self.states:
            lines.append(f'  "{_fmt(a)}";')
        for a, f, b in self.edges():
            if a == self.zero_state:
                continue
            lines.append(f'  "{_fmt(a)}" -> "{_fmt(b)}" [label="{_fmt(f)}"];')
        lines.append("}")
        return "\n".join(lines)


def _fmt(p):
    return "(" + ",".join(str(c) for c in p) + ")" if len(p) > 1 else str(p[0])


def _close_under_digits(sys, S):
    """Smallest superset of S with T(S) ⊆ S, T the digit map."""
    S = set(S)
    todo = list(S)
    while todo:
        j = sys.decompose(todo.pop())[0]
        if j not in S:
            S.add(j)
            todo.append(j)
    return S


def check_B(sys, B, K=None):
    """Raise BadB unless K ⊆ B ⊆ L(B) + F1."""
    if K is None:
        K, _ = coreset.compute_K(sys)
    B = set(B)
    if not set(K) <= B:
        raise BadB(f"K is not contained in B (missing {sorted(set(K) - B)})")
    outside = [b for b in sorted(B) if sys.decompose(b)[0] not in B]
    if outside:
        raise BadB(f"B is not contained in L(B)+F1 (e.g. {outside[0]})")


def build_graph(sys, B, states=None, C=None, K=None):
    """G(L, F1, B) on the states C+B.

    An explicit ``states`` set may replace C+B; it must contain K and be
    closed under the transitions.
    """
    check_B(sys, B, K)
    if states is None:
        if C is None:
            C = coreset.compute_C_LF(sys)
        states = lat.minkowski(C, B)
    states = sorted(set(states))
    limits.check("states", len(states), "graph states")
    index = {s: i for i, s in enumerate(states)}
    alphabet = sorted(sys.F1)
    delta = []
    for a in states:
        row = []
        for f in alphabet:
            b = sys.decompose(lat.vadd(a, f))[0]
            if b not in index:
                raise InvariantBreach(f"transition {a} -[{f}]-> {b} leaves the state set")
            row.append(index[b])
        delta.append(row)
    zero = (0,) * sys.d
    if zero not in index:
        raise InvariantBreach("zero is not a state")
    z = index[zero]
    if any(t != z for t in delta[z]):
        raise InvariantBreach("zero state is not a sink")
    return SyncGraph(states, alphabet, delta, zero, index)


def can_synchronize(G):
    """True iff every state reaches the zero state (reverse search from 0)."""
    rev = [[] for _ in G.states]
    for i, row in enumerate(G.delta):
        for t in row:
            rev[t].append(i)
    seen = {G.zero}
    todo = deque([G.zero])
    while todo:
        for i in rev[todo.popleft()]:
            if i not in seen:
                seen.add(i)
                todo.append(i)
    return len(seen) == len(G.states), [G.states[i] for i in range(len(G.states)) if i not in seen]


def _apply(G, subset, k):
    return frozenset(G.delta[i][k] for i in subset)


def _exact_word(G, max_subsets):
    start = frozenset(range(len(G.states)))
    goal = frozenset([G.zero])
    parent = {start: None}
    todo = deque([start])
    while todo:
        s = todo.popleft()
        if s == goal:
            word = []
            while parent[s] is not None:
                s, k = parent[s]
                word.append(G.alphabet[k])
            return word[::-1]
        for k in range(len(G.alphabet)):
            t = _apply(G, s, k)
            if t not in parent:
                parent[t] = (s, k)
                if len(parent) > max_subsets:
                    raise ResourceLimit(f"subset search exceeded {max_subsets} subsets")
                todo.append(t)
    return None


def _path_to_zero(G, i):
    """Shortest word sending state i to zero, letters tried in order."""
    parent = {i: None}
    todo = deque([i])
    while todo:
        s = todo.popleft()
        if s == G.zero:
            word = []
            while parent[s] is not None:
                s, k = parent[s]
                word.append(k)
            return word[::-1]
        for k, t in enumerate(G.delta[s]):
            if t not in parent:
                parent[t] = (s, k)
                todo.append(t)
    return None


def _greedy_word(G):
    cur = set(range(len(G.states)))
    word = []
    while cur != {G.zero}:
        best = None
        for i in sorted(cur - {G.zero}):
            p = _path_to_zero(G, i)
            if best is None or len(p) < len(best):
                best = p
        for k in best:
            cur = {G.delta[i][k] for i in cur}
        word.extend(best)
    return [G.alphabet[k] for k in word]


def find_sync_word(G, mode="exact", max_subsets=None):
    """A word sending every state to zero, or None when none exists.

    exact: breadth-first search over state subsets, shortest word with
    lexicographic tie-breaking. greedy: route one state at a time along a
    shortest path, length at most (N-1)². auto: exact when the graph has at
    most 22 states, greedy otherwise.
    """
    ok, _ = can_synchronize(G)
    if not ok:
        return None
    if mode == "auto":
        mode = "exact" if len(G.states) <= EXACT_STATE_GATE else "greedy"
    if mode == "exact":
        return _exact_word(G, max_subsets or limits.cap("states"))
    if mode == "greedy":
        return _greedy_word(G)
    raise ValueError(f"unknown mode {mode!r}")


def word_value(sys, word):
    """Σ L^i(word_i)."""
    f = (0,) * sys.d
    P = lat.mat_pow(sys.L, 0)
    for g in word:
        f = lat.vadd(f, lat.mat_vec(P, g))
        P = lat.mat_mul(sys.L, P)
    return f


def in_Fn(sys, p, n):
    """Exact membership p in Fₙ: n digit steps must end at 0."""
    for _ in range(n):
        p = sys.decompose(p)[0]
    return all(c == 0 for c in p)


def cerny_bound(N):
    return (N ** 3 - N) // 6


@dataclass
class FolnerVerdict:
    is_folner: bool
    word: list = None
    n: int = 0
    witness_f: tuple = None
    state_count: int = 0
    cerny_style_bound: int = 0
    theorem_bound: float = 0.0
    mode: str = ""
    unreachable: list = None
    witness_verified: bool = False

    def to_dict(self):
        return {
            "is_folner": self.is_folner,
            "word": [list(f) for f in self.word] if self.word is not None else None,
            "n": self.n,
            "witness_f": list(self.witness_f) if self.witness_f is not None else None,
            "witness_verified": self.witness_verified,
            "state_count": self.state_count,
            "cerny_style_bound": self.cerny_style_bound,
            "theorem_bound": self.theorem_bound,
            "mode": self.mode,
            "unreachable": [list(s) for s in self.unreachable or []],
        }


def default_B(sys, K=None):
    """The lattice points of the ball of radius r̄, closed under the digit map and joined with K."""
    if K is None:
        K, _ = coreset.compute_K(sys)
    return _close_under_digits(sys, lat.ball_points(sys.r_bar, sys.d) | set(K))


def verify_word(sys, states, word):
    """f + states ⊆ Fₙ for f the value of word and n its length."""
    f = word_value(sys, word)
    n = len(word)
    return f, all(in_Fn(sys, lat.vadd(f, s), n) for s in states)


def decide_folner(sys, B=None, mode="auto"):
    K, _ = coreset.compute_K(sys)
    if B is None:
        B = default_B(sys, K)
    G = build_graph(sys, B, K=K)
    N = len(G.states)
    six = 6 * sys.r_bar
    thm = (six ** (3 * sys.d) - six ** sys.d) / 6
    ok, missing = can_synchronize(G)
    if not ok:
        return FolnerVerdict(False, None, 0, None, N, cerny_bound(N), thm, mode,
                             missing)
    used = mode
    if mode == "auto":
        used = "exact" if N <= EXACT_STATE_GATE else "greedy"
    try:
        word = find_sync_word(G, used)
    except ResourceLimit:
        used = "greedy"
        word = find_sync_word(G, used)
    f, good = verify_word(sys, G.states, word)
    if not good:
        raise InvariantBreach("synchronizing word does not give f + C + B ⊆ Fₙ")
    return FolnerVerdict(True, word, len(word), f, N, cerny_bound(N), thm, used,
                         [], good)


def folner_profile(sys, v, n_range):
    """Exact ratios |Fₙ Δ (v + Fₙ)| / |Fₙ| for n in n_range."""
    out = []
    for n in n_range:
        out.append(lat.sym_diff_ratio(lat.support_iterate(sys, n), tuple(v)))
    return out


def sparse_example(n):
    """Aₙ = ⟦0, n⟧ ∪ {−k(k+3)/2 : 0 ≤ k ≤ n}, a sequence that is not Følner."""
    return {(i,) for i in range(n + 1)} | {(-(k * (k + 3)) // 2,) for k in range(n + 1)}


__all__ = ["SyncGraph", "FolnerVerdict", "build_graph", "find_sync_word",
           "decide_folner", "folner_profile", "word_value", "in_Fn",
           "verify_word", "check_B", "default_B", "can_synchronize",
           "sparse_example", "Fraction"]

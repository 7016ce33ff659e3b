from fractions import Fraction

import pytest

from constshape import coreset, folner, io
from constshape import lattice as lat
from constshape.errors import BadB

from oracles import sparse_support

FIGURE_STATES = {(0, 0), (1, 2), (1, 1), (2, 1), (1, 0), (1, -1), (0, -1), (-1, -2),
                 (-1, -1), (-2, -1), (-1, 0), (-1, 1), (0, 1), (2, 2), (0, 2), (-2, 0)}
EXAMPLE_WORD = [(0, 1), (1, 0), (-1, -1), (0, 1)]


def sys_of(name):
    return io.fixture(name).sys


def K_of(sys):
    return coreset.compute_K(sys)[0]


def test_graph_1d_states():
    sys = sys_of("thue_morse_1d")
    G = folner.build_graph(sys, K_of(sys))
    assert G.states == [(-1,), (0,), (1,)]


@pytest.mark.parametrize("name,word", [("thue_morse_1d", [(0,), (1,)]), ("block_1d_3", [(1,)])])
def test_exact_words_1d(name, word):
    sys = sys_of(name)
    G = folner.build_graph(sys, K_of(sys))
    assert folner.find_sync_word(G, "exact") == word


def test_sink_and_edges():
    sys = sys_of("triangular")
    G = folner.build_graph(sys, K_of(sys))
    z = G.zero_state
    assert all(G.step(z, f) == z for f in G.alphabet)
    assert len(G.edge_list()) == len(G.states) * 4
    assert G.to_dot().startswith("digraph")
    # determinism: each edge satisfies f + a = L(b) + g
    for a, f, b in G.edges():
        j, _ = sys.decompose(lat.vadd(a, f))
        assert j == b


def test_bad_B():
    sys = sys_of("triangular")
    with pytest.raises(BadB):
        folner.build_graph(sys, {(0, 0)})


def test_example_word_on_16_state_graph():
    sys = sys_of("triangular")
    G = folner.build_graph(sys, K_of(sys), states=FIGURE_STATES)
    assert len(G.states) == 16
    assert all(G.run(s, EXAMPLE_WORD) == (0, 0) for s in G.states)
    f, ok = folner.verify_word(sys, FIGURE_STATES, EXAMPLE_WORD)
    assert f == (-2, 5) and ok
    assert folner.in_Fn(sys, (-2, 5), 4)


def test_graph_on_C_plus_K():
    sys = sys_of("triangular")
    G = folner.build_graph(sys, K_of(sys))
    assert len(G.states) == 31
    assert set(FIGURE_STATES) <= set(G.states)
    left = {s for s in G.states if G.run(s, EXAMPLE_WORD) != (0, 0)}
    assert left == {(-3, -1), (-2, -3), (-2, -2), (-1, -3), (-1, 2), (1, 3)}
    assert {G.run(s, EXAMPLE_WORD) for s in left} == {(0, 1), (-1, 0)}


@pytest.mark.parametrize("name", ["triangular", "block_2d_2", "block_2d_3", "block_1d_3", "thue_morse_1d", "sigma1"])
def test_decide_positive(name):
    v = folner.decide_folner(sys_of(name))
    assert v.is_folner and v.witness_verified
    sys = sys_of(name)
    C = coreset.compute_C_LF(sys)
    Fn = set(lat.support_iterate(sys, v.n))
    B = folner.default_B(sys)
    assert v.witness_f in lat.shrink(Fn, lat.minkowski(C, B))
    assert v.witness_f == folner.word_value(sys, v.word)
    assert len(v.word) <= (v.state_count - 1) ** 2


def test_exact_and_greedy_agree():
    for name in ["thue_morse_1d", "block_1d_3", "block_2d_2"]:
        sys = sys_of(name)
        G = folner.build_graph(sys, K_of(sys))
        e = folner.find_sync_word(G, "exact")
        g = folner.find_sync_word(G, "greedy")
        assert e is not None and g is not None and len(e) <= len(g)


def test_decide_negative():
    sys = sys_of("sparse13")
    v = folner.decide_folner(sys)
    assert not v.is_folner and v.unreachable
    G = folner.build_graph(sys, K_of(sys))
    assert folner.find_sync_word(G, "exact") is None
    assert folner.find_sync_word(G, "greedy") is None


def test_sparse_closed_form_and_profile():
    sys = sys_of("sparse13")
    for n in range(11):
        assert set(lat.support_iterate(sys, n)) == sparse_support(n)
    assert folner.folner_profile(sys, (1,), range(1, 11)) == [2] * 10


def test_profile_triangular():
    sys = sys_of("triangular")
    prof = folner.folner_profile(sys, (1, 0), range(1, 7))
    assert all(a >= b for a, b in zip(prof, prof[1:]))
    assert prof[-1] < 0.5
    assert folner.folner_profile(sys, (0, 0), range(1, 4)) == [0, 0, 0]


@pytest.mark.parametrize("name,n", [("triangular", 9), ("block_2d_2", 8)])
def test_profile_small(name, n):
    sys = sys_of(name)
    for v in lat.ball_points(2, 2):
        if any(v):
            assert folner.folner_profile(sys, v, [n])[0] < 0.25


def test_profile_triangular_n8_value():
    # 2·(3/4)^8 for unit steps; the 0.25 level is only crossed at n = 9
    assert folner.folner_profile(sys_of("triangular"), (1, 0), [8, 9]) == [
        Fraction(6561, 32768), Fraction(19683, 131072)]
    assert folner.folner_profile(sys_of("triangular"), (2, 0), [8]) == [Fraction(2187, 8192)]


def test_cerny_bound():
    assert folner.cerny_bound(3) == 4
    v = folner.decide_folner(sys_of("triangular"))
    assert v.n <= v.cerny_style_bound

import random

import numpy as np
import pytest

from constshape import coreset, io
from constshape import lattice as lat
from constshape import substitution as sb
from constshape.errors import InvalidSubstitution, NotFolner

from oracles import window_complexity, window_language

FIXTURES = ["triangular", "sigma1", "thue_morse_1d", "block_1d_3", "block_2d_2", "block_2d_3"]

# germ figures, cells listed as (1,1), (-1,0), (0,0), (0,-1)
TM_GERMS = {tuple(w) for w in ["bbaa", "aabb", "abba", "baab", "abab", "baba", "aaaa", "bbbb"]}
TM_K = [(1, 1), (-1, 0), (0, 0), (0, -1)]
# rows (-1,0) (0,0) over (-1,-1) (0,-1)
S1_GERMS = {("9", "0", "0", "10"), ("4", "8", "8", "6"), ("13", "0", "3", "14"),
            ("1", "8", "11", "2"), ("13", "12", "4", "10"), ("1", "7", "9", "6"),
            ("9", "12", "6", "14"), ("4", "7", "10", "2")}
S1_K = [(-1, 0), (0, 0), (-1, -1), (0, -1)]


def germ_words(sub, order):
    out = set()
    for s in sb.periodic_seeds(sub):
        x = sb.expand_seed(sub, s, order)
        out.add(tuple(sub.alphabet[x[p]] for p in order))
    return out


def test_germ_figures(tm, s1):
    assert len(sb.periodic_seeds(tm)) == 8
    assert len(sb.periodic_seeds(s1)) == 8
    assert germ_words(tm, TM_K) == TM_GERMS
    assert germ_words(s1, S1_K) == S1_GERMS


def test_seeds_1d(tm1):
    seeds = sb.periodic_seeds(tm1)
    assert len(seeds) == 4
    assert all(s.period in (1, 2) for s in seeds)


@pytest.mark.parametrize("name", ["triangular", "sigma1", "thue_morse_1d"])
def test_seed_count_at_most_language_over_K(name):
    sub = io.fixture(name)
    K = sorted(coreset.compute_K(sub.sys)[0])
    assert len(sb.periodic_seeds(sub)) <= len(sb.language(sub, K))


def test_germ_map_preserves_language(tm):
    K = sorted(coreset.compute_K(tm.sys)[0])
    words = set(sb.language(tm, K).words)
    assert {sb.germ_map(tm, w) for w in words} <= words


def test_expanded_seed_is_power_fixed(tm):
    s = sb.periodic_seeds(tm)[0]
    win = sb.box_window(2, 8)
    x = sb.expand_seed(tm, s, win)
    img = x
    for _ in range(s.period):
        img = sb.substitute_pattern(tm, img)
    assert all(img[p] == x[p] for p in win)
    small = sb.expand_seed(tm, s, sb.box_window(2, 3))
    assert all(small[p] == x[p] for p in small.cells)


def test_singleton_image(tm):
    p = sb.substitute_pattern(tm, sb.Pattern({(0, 0): 0}))
    assert p.cells == {f: a for f, a in zip(tm.sys.F1, tm.rules[0])}


def test_iterate_associative(tm):
    rng = random.Random(5)
    p = sb.Pattern({(rng.randint(-3, 3), rng.randint(-3, 3)): rng.randint(0, 1) for _ in range(3)})
    two = sb.substitute_pattern(tm, sb.substitute_pattern(tm, p))
    sq = sb.power(tm, 2)
    assert sb.substitute_pattern(sq, p).cells == two.cells


def test_power_incidence(tm, s1):
    for sub in (tm, s1):
        M = np.array(sb.incidence_matrix(sub))
        M3 = np.array(sb.incidence_matrix(sb.power(sub, 3)))
        assert (np.linalg.matrix_power(M, 3) == M3).all()


@pytest.mark.parametrize("name", FIXTURES)
def test_primitive_within_wielandt(name):
    sub = io.fixture(name)
    prim, k = sb.is_primitive(sub)
    assert prim
    assert k <= sb.wielandt_bound(sub.n_letters)


def test_wielandt_bound_values():
    assert [sb.wielandt_bound(n) for n in (1, 2, 3, 16)] == [1, 2, 5, 226]


def test_non_primitive_detected():
    sys = lat.ExpansionSystem([[2]], [(0,), (1,)])
    sub = sb.Substitution(sys, ["a", "b"], [(0, 0), (1, 1)])
    assert sb.is_primitive(sub) == (False, None)


def test_validate_rejects():
    sys = lat.ExpansionSystem([[2]], [(0,), (1,)])
    with pytest.raises(InvalidSubstitution):
        sb.validate(sb.Substitution(sys, ["a", "b"], [(0, 1), (1,)]))
    with pytest.raises(NotFolner):
        sb.validate(io.fixture("sparse13"))


def test_validate_report(tm):
    rep = sb.validate(tm)
    assert rep["folner"] and rep["primitive"] and rep["unused_letters"] == []


@pytest.mark.parametrize("name,r", [("triangular", 1), ("triangular", 2), ("sigma1", 1),
                                    ("thue_morse_1d", 3), ("block_2d_2", 1)])
def test_language_matches_windows(name, r):
    sub = io.fixture(name)
    P = sorted(lat.ball_points(r, sub.d))
    assert set(sb.language(sub, P).words) == window_language(sub, P, 24)


def test_language_contains_germ_figure(tm):
    K = sorted(coreset.compute_K(tm.sys)[0])
    words = {tuple(tm.alphabet[a] for a in w) for w in sb.language(tm, K).words}
    pos = [K.index(p) for p in TM_K]
    assert {tuple(w[i] for i in pos) for w in words} >= TM_GERMS


def test_complexity_1d_thue_morse(tm1):
    # factor complexity of Thue-Morse for words of length 2r+1 = 3, 5, 7
    assert [sb.complexity(tm1, r) for r in (1, 2, 3)] == [6, 12, 20]


def test_complexity_bound(tm):
    assert sb.complexity_exponent(tm) == pytest.approx(2.0)
    for r in range(1, 5):
        assert sb.complexity_bound_holds(tm, r)
    assert sb.complexity(tm, 2) == window_complexity(tm, 2, 24)


def test_repetitivity_1d(tm1):
    R, log_bound = sb.repetitivity(tm1, 1)
    assert R is not None and R >= 1
    assert log_bound > 0


def test_aperiodicity(tm):
    assert sb.aperiodicity_scan(tm, window_radius=12, period_bound=6)["periods"] == []


def test_window_language_of_iterate(tm):
    p = sb.iterate(tm, 0, 4)
    assert len(p.cells) == 4 ** 4
    got = sb.language_from_window(p, [(0, 0), (1, 0)])
    assert got <= set(sb.language(tm, [(0, 0), (1, 0)]).words)


def test_complexity_golden_matches_window_oracle(tm):
    # radius 32 still misses 6 patterns of radius 6, radius 48 sees them all
    import json
    from pathlib import Path
    golden = json.loads((Path(__file__).parent / "golden" / "triangular_complexity.json").read_text())
    assert [window_complexity(tm, r, 48) for r in golden["r"]] == golden["p"]

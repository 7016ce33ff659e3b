import pytest

from constshape import io
from constshape import lattice as lat
from constshape import substitution as sb
from constshape import transform as tr
from constshape.errors import NotFolner
from constshape.factor import certify_factor, check_inverse_pair

SQUARE = [(0, 0), (1, 0), (0, 1), (1, 1)]


@pytest.fixture(scope="module")
def square_tm(tm):
    return tr.change_support(tm, SQUARE)


def test_change_support_sets(square_tm):
    new, pair = square_tm
    B = pair.checks["B"]
    assert set(B) <= set(lat.box_points(-1, 2, 2))
    assert pair.checks["K2"] == sorted(lat.box_points(-1, 0, 2))
    assert set(new.sys.F1) == set(SQUARE)
    assert new.n_letters == len(sb.language(io.fixture("triangular"), B))


def test_change_support_window_checks(square_tm):
    new, pair = square_tm
    assert pair.checks["roundtrip"] and pair.checks["seed_transport"]
    assert pair.verified_window == 16
    assert sb.is_primitive(new)[0]


def test_change_support_maps_certify(tm, square_tm):
    new, pair = square_tm
    assert certify_factor(pair.forward, tm, new, budget=1) is not None
    assert certify_factor(pair.backward, new, tm, budget=1) is not None
    assert check_inverse_pair(pair.forward, pair.backward, tm, new) == ((0, 0), (0, 0))


def test_change_support_1d(tm1):
    new, pair = tr.change_support(tm1, [(0,), (-1,)])
    assert pair.checks["roundtrip"] and pair.checks["seed_transport"]
    assert certify_factor(pair.forward, tm1, new, budget=1) is not None


def test_change_support_same_domain(tm):
    new, pair = tr.change_support(tm, list(reversed(tm.sys.F1)))
    assert new is tm and pair.checks["shortcut"]


def test_change_support_non_folner():
    sub = sb.Substitution(lat.ExpansionSystem([[2]], [(0,), (1,)]), ["a", "b"],
                          {"a": ["a", "b"], "b": ["b", "a"]})
    with pytest.raises(NotFolner):
        tr.change_support(sub, [(0,), (3,)])


def test_injectivize_cascade():
    sub = tr.cascade_example()
    out, pair, steps = tr.injectivize(sub)
    assert len(steps) == 3
    assert out.n_letters == 4
    assert [s["letters"] for s in steps] == [6, 5, 4]
    # the letter coding intertwines the two substitutions
    phi = pair.forward
    for a in range(sub.n_letters):
        b = phi((a,))
        assert tuple(phi((c,)) for c in sub.rules[a]) == out.rules[b]
    assert len(set(out.rules)) == out.n_letters


def test_injectivize_noop(tm):
    out, pair, steps = tr.injectivize(tm)
    assert steps == [] and out.rules == tm.rules
    assert pair.backward is None


def test_power_is_square(tm):
    sq = tr.power(tm, 2)
    assert sq.sys.L == ((4, 0), (0, 4))
    assert len(sq.sys.F1) == 16

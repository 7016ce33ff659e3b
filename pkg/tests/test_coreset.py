import pytest

from constshape import coreset, io
from constshape import lattice as lat

FIXTURES = ["triangular", "sigma1", "sparse13", "thue_morse_1d", "block_1d_3",
            "block_2d_2", "block_2d_3"]


def sys_of(name):
    return io.fixture(name).sys


def brute_K(sys, radius=6, m_max=8):
    """Points x of a box with (Id − L^m)x ∈ F_m for some m ≤ m_max, straight from the definition."""
    out = set()
    for m in range(1, m_max + 1):
        Fm = set(lat.support_iterate(sys, m))
        Lm = lat.mat_pow(sys.L, m)
        for x in lat.box_points(-radius, radius, sys.d):
            if lat.vsub(x, lat.mat_vec(Lm, x)) in Fm:
                out.add(x)
    return out


def test_K_triangular():
    K, j = coreset.compute_K(sys_of("triangular"))
    assert K == {(-1, 0), (0, 0), (0, -1), (1, 1)}
    assert j == 1


@pytest.mark.parametrize("name", ["block_1d_3", "block_2d_2", "block_2d_3", "thue_morse_1d"])
def test_K_blocks(name):
    sys = sys_of(name)
    K, _ = coreset.compute_K(sys)
    assert K == lat.box_points(-1, 0, sys.d)


@pytest.mark.parametrize("name", FIXTURES)
def test_K_matches_definition(name):
    sys = sys_of(name)
    K, _ = coreset.compute_K(sys)
    assert K == brute_K(sys, radius=4, m_max=6 if sys.d == 1 else 4)


def test_K_sparse():
    K, j = coreset.compute_K(sys_of("sparse13"))
    # x = 2x + f, f ∈ {0, 3} gives 0 and -3; the 2-cycles add -1 and -2
    assert K == {(0,), (-3,), (-1,), (-2,)}
    assert j == 2


@pytest.mark.parametrize("name", FIXTURES)
def test_coverage(name):
    sys = sys_of(name)
    K, _ = coreset.compute_K(sys)
    assert coreset.coverage_check(sys, K, 15 if sys.d == 2 else 40, 12) <= 12


@pytest.mark.parametrize("name", ["block_1d_3", "block_2d_2", "block_2d_3", "thue_morse_1d"])
def test_C_blocks(name):
    sys = sys_of(name)
    assert coreset.compute_C_LF(sys) == lat.box_points(0, 1, sys.d)


@pytest.mark.parametrize("name", FIXTURES)
def test_C_inclusions(name):
    sys = sys_of(name)
    C = coreset.compute_C_LF(sys)
    zero = {(0,) * sys.d}
    res = coreset.check_C_inclusions(sys, C, zero, lat.minkowski(sys.F1, sys.F1), 3)
    assert res == {"item1": True, "item2": True, "item3": True}
    assert coreset.check_C_telescoping(sys, C, 3)
    assert lat.set_norm(C) <= coreset.C_norm_bound(sys, zero, lat.minkowski(sys.F1, sys.F1))


def test_C_triangular_size():
    C = coreset.compute_C_LF(sys_of("triangular"))
    assert len(C) == 16 and (-2, -2) in C and (2, 2) not in C


def test_C_is_least_fixpoint():
    sys = sys_of("triangular")
    C = coreset.compute_C_LF(sys)
    add = lat.minkowski(sys.F1, sys.F1, {lat.vneg(f) for f in sys.F1})
    step = sys.preimage_set({lat.vadd(c, a) for c in C for a in add})
    assert step | C == C
    # removing any non-zero point breaks closure
    for p in C - {(0, 0)}:
        smaller = C - {p}
        nxt = sys.preimage_set({lat.vadd(c, a) for c in smaller for a in add}) | smaller
        assert nxt != smaller or (0, 0) not in smaller


def test_A_support_change():
    sys = sys_of("triangular")
    G1 = [(0, 0), (1, 0), (0, 1), (1, 1)]
    A = coreset.compute_A_supportchange(sys, G1)
    K2, _ = coreset.compute_K(lat.ExpansionSystem(sys.L, G1))
    assert lat.minkowski(K2, A) <= lat.box_points(-1, 2, 2)
    assert coreset.check_A_supportchange(sys, G1, A, K2, 3)


def test_core_sets_bounds():
    rep = coreset.core_sets(sys_of("triangular"))
    b = rep["bounds"]
    assert b["K_norm"] <= b["K_bound"] and b["C_norm"] <= b["C_bound"]

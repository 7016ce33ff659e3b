import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from constshape import lattice as lat
from constshape.errors import (AmbiguousExpansion, InvalidDomain, NotCovered,
                               NotExpansive, SingularMatrix)

from oracles import power_iteration_norm, singular_values_2x2

TRI = lat.ExpansionSystem([[2, 0], [0, 2]], [(0, 0), (1, 0), (0, 1), (-1, -1)])
SQUARE = lat.ExpansionSystem([[2, 0], [0, 2]], [(0, 0), (1, 0), (0, 1), (1, 1)])
SHEAR = lat.ExpansionSystem([[2, 1], [0, 2]], [(0, 0), (1, 0), (0, 1), (1, 1)])
TWIN = lat.ExpansionSystem([[1, -1], [1, 1]], [(0, 0), (1, 0)])
ONE = lat.ExpansionSystem([[3]], [(0,), (1,), (2,)])

matrices = st.lists(st.lists(st.integers(-6, 6), min_size=3, max_size=3), min_size=3, max_size=3)


@given(matrices)
def test_det_matches_numpy(M):
    assert lat.det(M) == round(np.linalg.det(np.array(M, dtype=float)))


@given(matrices)
def test_adjugate_identity(M):
    D = lat.det(M)
    A = lat.adjugate(M)
    P = lat.mat_mul(M, A)
    assert P == tuple(tuple(D * (i == j) for j in range(3)) for i in range(3))


@pytest.mark.parametrize("M", [[[2, 0], [0, 2]], [[2, 1], [0, 2]], [[1, -1], [1, 1]], [[3, 1], [1, 2]]])
def test_norms_against_oracles(M):
    info = lat.check_expansion(M)
    smax, smin = singular_values_2x2(M)
    assert info["sigma_max"] == pytest.approx(smax, rel=1e-12)
    assert info["sigma_min"] == pytest.approx(smin, rel=1e-12)
    assert info["sigma_max"] == pytest.approx(power_iteration_norm(M), rel=1e-9)
    inv = np.linalg.inv(np.array(M, dtype=float))
    assert info["inv_norm"] == pytest.approx(power_iteration_norm(inv), rel=1e-9)
    # rounding is outward
    assert info["mat_norm"] >= smax and info["inv_norm"] >= 1 / smin


def test_expansion_errors():
    with pytest.raises(SingularMatrix):
        lat.check_expansion([[1, 2], [2, 4]])
    with pytest.raises(AmbiguousExpansion):
        lat.check_expansion([[1, 0], [0, 2]])
    with pytest.raises(NotExpansive):
        lat.check_expansion([[1, 1], [0, 1]])


def test_fundamental_domain_checks():
    assert lat.check_fundamental_domain([[2]], [(0,), (3,)])["ok"]
    rep = lat.check_fundamental_domain([[2]], [(0,), (2,)])
    assert not rep["ok"] and rep["duplicates"] == [((0,), (2,))]
    assert not lat.check_fundamental_domain([[2]], [(1,), (2,)])["ok"]
    assert not lat.check_fundamental_domain([[3]], [(0,), (1,)])["ok"]
    with pytest.raises(InvalidDomain):
        lat.ExpansionSystem([[2, 0], [0, 2]], [(0, 0), (2, 0), (0, 1), (1, 1)])


def test_r_bar_triangular():
    assert TRI.r_bar == pytest.approx(math.sqrt(2), abs=1e-9)
    assert TRI.inv_F1_norm_sq == Fraction(1, 2)


@pytest.mark.parametrize("sys", [TRI, SQUARE, SHEAR, TWIN, ONE])
@settings(max_examples=200)
@given(data=st.data())
def test_decompose_roundtrip(sys, data):
    p = tuple(data.draw(st.integers(-200, 200)) for _ in range(sys.d))
    j, f = sys.decompose(p)
    assert f in sys.F1set
    assert lat.vadd(sys.apply(j), f) == p


def test_decompose_box_roundtrip():
    for p in lat.box_points(-20, 20, 2):
        j, f = TRI.decompose(p)
        assert lat.vadd(TRI.apply(j), f) == p


@pytest.mark.parametrize("sys", [TRI, SQUARE, SHEAR, ONE])
def test_support_iterate(sys):
    for n in range(4):
        F, digits = lat.support_iterate(sys, n, with_digits=True)
        assert len(F) == len(set(F)) == sys.absdet ** n
        for p, ds in digits.items():
            acc = (0,) * sys.d
            for i, f in enumerate(ds):
                acc = lat.vadd(acc, lat.mat_vec(lat.mat_pow(sys.L, i), f))
            assert acc == p
    F2 = set(lat.support_iterate(sys, 2))
    F3 = set(lat.support_iterate(sys, 3))
    assert F3 == {lat.vadd(sys.apply(j), f) for j in F2 for f in sys.F1}


def test_digit_decompose_worked_point():
    K = {(-1, 0), (0, 0), (0, -1), (1, 1)}
    n, k, digits = lat.digit_decompose(TRI, K, (-2, 5))
    assert (n, k) == (4, (0, 0))
    assert digits == [(0, 1), (1, 0), (-1, -1), (0, 1)]
    with pytest.raises(NotCovered):
        lat.digit_decompose(TRI, K, (50, 50), n_max=2)


def test_sym_diff_and_shrink():
    F = {(0,), (1,), (2,)}
    assert lat.sym_diff_ratio(F, (1,)) == Fraction(2, 3)
    assert lat.sym_diff_ratio(F, (0,)) == 0
    assert lat.shrink(F, {(0,), (1,)}) == {(0,), (1,)}


def test_ball_keeps_boundary():
    B = lat.ball_points(math.sqrt(2), 2)
    assert (1, 1) in B and (-1, -1) in B and (2, 0) not in B
    assert len(lat.ball_points(lat._up(math.sqrt(2)), 2)) == 9


def test_preimage_set():
    assert TRI.preimage_set({(2, 4), (1, 0), (-2, 0)}) == {(1, 2), (-1, 0)}

import pytest

from constshape import factor as fc
from constshape import lattice as lat
from constshape import substitution as sb
from constshape.errors import NotCertified, UsageError
from constshape.transform import cascade_example

ZERO = (0, 0)


def swap(sub):
    return fc.BlockMap(sub.alphabet, sub.alphabet, [(0,) * sub.d],
                       {(a,): 1 - a for a in range(2)})


def test_phi_commutes(phi, s1, tm):
    assert fc.verify_commutation(phi, s1, tm, ZERO, 1)
    assert fc.verify_commutation(phi, s1, tm, ZERO, 2)
    assert not fc.verify_commutation(phi, s1, tm, (1, 0), 1)


def test_certificates(phi, psi, s1, tm):
    c = fc.certify_factor(phi, s1, tm)
    assert c is not None and c.f == ZERO and c.n == 1
    assert fc.certify_factor(psi, tm, s1) is not None
    doc = c.to_doc()
    assert len(doc["hash"]) == 64


def test_corrupted_table_rejected(phi, s1, tm):
    table = dict(phi.table)
    key = sorted(table)[0]
    table[key] = 1 - table[key]
    bad = fc.BlockMap(phi.source, phi.target, phi.support, table)
    assert not fc.verify_commutation(bad, s1, tm, ZERO, 1)
    with pytest.raises(NotCertified):
        fc.certify_factor(bad, s1, tm, budget=2)


def test_shift_equivariance(psi, s1, tm):
    # φ(S^v x) = S^v φ(x) on an expanded window
    x = sb.expand_seed(tm, sb.periodic_seeds(tm)[0], sb.box_window(2, 8))
    v = (1, 2)
    sx = sb.Pattern({lat.vsub(p, v): a for p, a in x.cells.items()})
    a, b = psi.apply(sx).cells, psi.apply(x).cells
    for p, c in a.items():
        assert b[lat.vadd(p, v)] == c


def test_commutation_shift_unique(phi, s1, tm):
    sys2 = fc._power_data(tm, 2)[0]
    good = [f for f in sys2.F1 if fc.verify_commutation(phi, s1, tm, f, 2)]
    assert good == [ZERO]


def test_inverse_pair(phi, psi, s1, tm):
    assert fc.check_inverse_pair(phi, psi, s1, tm) == (ZERO, ZERO)
    v = fc.check_conjugacy(phi, s1, tm, inverse=psi)
    assert v.conjugate


def test_composition_closure(phi, psi, s1, tm):
    comp = fc.compose(psi, phi, s1)
    assert fc.certify_factor(comp, s1, s1, budget=1) is not None
    assert fc.equal_maps(comp, fc.identity_map(s1), s1)


def test_search_letter_maps_tm(tm):
    certs = fc.search_factors(tm, tm, [ZERO])
    tables = {tuple(sorted(c.map.table.items())) for c in certs}
    assert tables == {(((0,), 0), ((1,), 1)), (((0,), 1), ((1,), 0))}


def test_search_finds_phi(phi, s1, tm):
    certs = fc.search_factors(s1, tm, [ZERO])
    assert any(fc.equal_maps(c.map, phi, s1) for c in certs)


def test_swap_invertible_by_coalescence(tm):
    v = fc.check_conjugacy(swap(tm), tm, tm)
    assert v.conjugate and v.method == "coalescence" and v.power == 2


def test_census(tm, s1):
    assert len(fc.automorphism_census(tm)) == 2
    assert len(fc.automorphism_census(s1)) == 2


def test_shift_classes(tm):
    ident = fc.identity_map(tm)
    moved = ident.translate_support((1, 0))
    assert fc.shift_equivalent(ident, moved, tm) is not None
    assert fc.shift_equivalent(ident, swap(tm), tm) is None


def test_minimal_supports_not_unique(tm):
    # x_0 is a parity of three other cells on ΔTM
    sup = [(1, -1), (1, 0), (2, 1)]
    words = fc.words_on(tm, sup)
    table = {w: sum(w) % 2 for w in words}
    alt = fc.BlockMap(tm.alphabet, tm.alphabet, sup, table)
    assert fc.equal_maps(alt, fc.identity_map(tm), tm)


def test_renormalization_contracts(phi, s1, tm):
    cert = fc.certify_factor(phi, s1, tm)
    ren = fc.renormalize(cert, s1, tm)
    assert ren.verified and ren.cycle_length == 1
    radii = ren.radii()
    assert max(radii[1:], default=0) <= max(radii[0], 2 * s1.sys.r_bar + 1)


def test_renormalize_needs_injective_target():
    sub = cascade_example()
    bm = fc.identity_map(sub)
    with pytest.raises(UsageError):
        fc.renormalize_step(bm, sub, sub)


def test_decide(tm, s1):
    v = fc.decide_factorization(tm, s1, budget=1)
    assert v.answer == "yes"
    assert fc.certify_factor(v.certificate.map, tm, s1) is not None


def test_invariant_orbits(tm):
    res = fc.invariant_orbit_scan(tm, p_max=2)
    per_p = [sum(r["p"] == p for r in res["solutions"]) for p in (1, 2)]
    assert per_p == [0, 12]
    # the 8 period-2 seeds are among the solutions with j = 0
    assert sum(r["j"] == ZERO for r in res["solutions"]) == 8
    assert 1 <= len(res["orbits"]) <= 12

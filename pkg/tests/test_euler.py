import pytest

from anticyc import catalog, oracles
from anticyc.arith import is_prime
from anticyc.classfield import SplitDecomposition
from anticyc.errors import InputError, PreconditionFailed, SelfDualityViolated
from anticyc.euler import (EllipticCurve, P_poly, inert_check, root_number, selmer_selector, tame_check, tame_sweep,
                           twist_exponent)
from anticyc.iqfield import quadratic_field


@pytest.mark.parametrize("label", sorted(catalog.CURVES))
def test_traces_match_naive_point_count(label):
    E, _ = catalog.CURVES[label]
    coeffs = (E.a1, E.a2, E.a3, E.a4, E.a6)
    for ell in range(3, 120):
        if is_prime(ell) and E.has_good_reduction(ell):
            assert E.trace(ell) == ell + 1 - oracles.count_points_naive(coeffs, ell)


def test_curve_parsing():
    assert EllipticCurve.parse("[0,-1,1,-10,-20]") == catalog.CURVES["11a1"][0]
    with pytest.raises(InputError):
        EllipticCurve.parse("1,2,3")


def test_twist_exponent():
    assert twist_exponent(2, 2, 2) == 2
    assert twist_exponent(2, 1, 2).denominator == 2


def test_euler_polynomial_degree_two_constant_one():
    K = quadratic_field(-7)
    psi = catalog.character("sqrt-7/w2_p2sq")
    P = P_poly(catalog.form("11a1"), psi, psi, K.prime_ideals_above(53)[0])
    assert len(P.coefficients) == 3 and P.coefficients[0] == P.coefficients[0] ** 2
    # k = k1 = k2 = 2 gives s = 2: c1 = -a w / l^2, c2 = w^2 / l^3
    w = psi.evaluate(K.prime_ideals_above(53)[0]) ** 2
    assert P.coefficients[1] * 53 ** 2 == w * -catalog.form("11a1").a(53)
    assert P.coefficients[2] * 53 ** 3 == w * w
    with pytest.raises(PreconditionFailed):
        P_poly(catalog.form("11a1"), psi, psi, K.ideal(3))


@pytest.mark.parametrize("cfg", catalog.TAME_CONFIGS[:2])
def test_tame_relation_holds_and_detects_a_wrong_trace(cfg):
    D, curve, n1, n2, m, p = cfg
    K = quadratic_field(D)
    fd = catalog.form(curve)
    psi1, psi2 = catalog.character(n1), catalog.character(n2)
    dec = SplitDecomposition(K, m, p)
    reports = tame_sweep(fd, psi1, psi2, dec, 80)
    assert reports and all(r.passed for r in reports)
    if dec.Hring_p.order() > 1:
        ell = reports[0].ell
        prime = K.prime_ideals_above(ell)[0]
        assert not tame_check(fd, psi1, psi2, prime, dec, fd_euler=fd.with_trace(ell, fd.a(ell) + 1)).passed


def test_self_duality_is_enforced():
    psi = catalog.character("i/psi0_5")
    dec = SplitDecomposition(quadratic_field(-4), 41, 5)
    prime = psi.field.prime_ideals_above(13)[0]
    with pytest.raises(SelfDualityViolated):
        tame_check(catalog.form("11a1"), psi, psi, prime, dec)


def test_inert_congruence():
    K = quadratic_field(-7)
    fd = catalog.form("11a1")
    for ell in (3, 5, 13, 17, 19):
        rep = inert_check(fd, ell, K)
        assert rep.passed and rep.symbolic
    with pytest.raises(PreconditionFailed):
        inert_check(fd, 2, K)


def test_root_numbers_by_quadrant():
    assert root_number(0, 0, 2) == {"eps_fK": -1, "eps_fchi": -1, "quadrant": "1st"}
    assert root_number(1, 0, 2) == {"eps_fK": 1, "eps_fchi": 1, "quadrant": "2nd"}
    assert root_number(0, 3, 4) == {"eps_fK": -1, "eps_fchi": 1, "quadrant": "3rd"}
    assert root_number(1, 3, 4) == {"eps_fK": 1, "eps_fchi": -1, "quadrant": "4th"}
    with pytest.raises(InputError):
        root_number(0, 0, 3)


def test_selmer_selector_switches_at_half_weight():
    assert selmer_selector(1, 4)["condition"] == "OrdinaryOrdinary"
    assert selmer_selector(2, 4)["condition"] == "RelaxedStrict"
    assert selmer_selector(2, 4)["hodge_tate"]["values"]["at_p"] == [-4, -5]

import math
from fractions import Fraction

import pytest
import sympy

from anticyc.errors import PoleError
from anticyc.interp import (PiPowerValue, calE_BD, e_BDP, gamma_C, gamma_triple, gamma_triple_comparison,
                            in_katz_range, infinity_type_of_twists, katz_fe_transform, triple_Ep_factorization_check,
                            weight_substitution_check)


@pytest.mark.parametrize("s", range(1, 9))
def test_complex_gamma_closed_form(s):
    # 2 (2 pi)^-s (s-1)!
    assert gamma_C(s) == PiPowerValue(Fraction(2 * math.factorial(s - 1), 2 ** s), -s)


def test_complex_gamma_poles():
    for s in (0, -1, Fraction(1, 2)):
        with pytest.raises(PoleError):
            gamma_C(s)


def test_triple_gamma_is_a_product_of_four_factors():
    v = gamma_triple(4, 2, 2)
    assert v.e == -8 and v.q == Fraction(1, 8)


@pytest.mark.parametrize("k1,k2,r", [(4, 2, 1), (6, 2, 2), (8, 2, 3), (10, 4, 3)])
def test_explicit_gamma_list_differs_by_a_constant(k1, k2, r):
    c = gamma_triple_comparison(k1, k2, r)
    assert c["arguments_match"] and c["pi_exponent_match"] and c["constant_ratio"] == "256"


def test_euler_factor_identity_and_mutations():
    assert triple_Ep_factorization_check()
    assert not triple_Ep_factorization_check(swap_square=True)
    for e in ((2, 2, 1), (1, 1, 1), (1, 2, 2)):
        assert not triple_Ep_factorization_check(exponents=e)


def test_bd_factor_collapses_for_ramified_twists():
    assert calE_BD(n=2).expr == 1
    assert calE_BD(n=0).expr != 1


def test_bdp_factor_is_a_square():
    expr = e_BDP(n=0).expr
    assert isinstance(expr, sympy.Pow) and expr.exp == 2


def test_katz_functional_equation_type():
    assert katz_fe_transform((3, -1))["infinity_type"] == (2, -2)
    assert katz_fe_transform((2, -2))["infinity_type"] == (3, -1)
    assert in_katz_range((2, -1)) and not in_katz_range((0, 0))


def test_twist_infinity_types():
    assert infinity_type_of_twists(4, 2) == ((2, -2), (1, -1))


@pytest.mark.parametrize("p", [5, 7, 13])
def test_weight_substitution(p):
    for k1 in range(1, 7):
        for k2 in range(1, 7):
            if (k1 - k2) % 2 == 0:
                assert weight_substitution_check(p, k1, k2, 12)["passed"]

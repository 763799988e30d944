import pytest

from anticyc import oracles
from anticyc.classfield import (SplitDecomposition, keydiagram_check, ray_class_group, ring_class_group)
from anticyc.iqfield import quadratic_field


@pytest.mark.parametrize("D", [-3, -4, -7, -23])
def test_ray_class_numbers_match_oracle(D):
    K = quadratic_field(D)
    for I in K.iter_ideals(150):
        G = ray_class_group(K, I)
        assert G.order == oracles.ray_class_number(K, I)
        rep = G.exactness_report()
        assert rep["cardinality_identity"] and rep["kernel_matches"] and rep["surjective_to_H1"]


def test_ray_class_group_of_a_known_modulus():
    K = quadratic_field(-4)
    assert ray_class_group(K, K.ideal(5) * K.ideal((1, 1)) ** 3).order == 16


@pytest.mark.parametrize("D,m", [(-3, 5), (-4, 7), (-7, 6), (-23, 5), (-47, 3), (-4, 1)])
def test_ring_class_numbers(D, m):
    R = ring_class_group(quadratic_field(D), m)
    assert R.order == R.formula_order() == oracles.ring_class_number(D, m)
    rep = R.exactness_report()
    assert rep["cardinality_identity"] and rep["kernel_matches"]


def test_class_element_is_multiplicative():
    K = quadratic_field(-23)
    G = ray_class_group(K, K.ideal(3))
    P, Q = K.prime_ideals_above(13)[0], K.prime_ideals_above(29)[0]
    grp = G.group
    assert G.element(P * Q) == grp.op(G.element(P), G.element(Q))


@pytest.mark.parametrize("D,m,p", [(-4, 41, 5), (-7, 2, 13), (-4, 13, 7)])
def test_split_decomposition_verifies(D, m, p):
    v = SplitDecomposition(quadratic_field(D), m, p).verify(range(2, 80))
    assert v["kernel_equals_delta"] and v["surjective"] and v["cardinality"] and v["frobenius"]


def test_key_diagram_small_case():
    rep = keydiagram_check(quadratic_field(-4), 1, 41, 5)
    assert rep["passed"] and rep["pairs_checked"] >= 1

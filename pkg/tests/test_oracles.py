import pytest

from anticyc import oracles
from anticyc.iqfield import quadratic_field


@pytest.mark.parametrize("D,h", [(-23, 3), (-47, 5), (-71, 7), (-100, 2), (-847, 10), (-4, 1)])
def test_form_counts(D, h):
    assert oracles.reduced_form_count(D) == h


def test_reduction_is_idempotent():
    f = oracles.reduce_form_naive(7, 11, 5)
    assert oracles.reduce_form_naive(*f) == f
    a, b, c = f
    assert b * b - 4 * a * c == 11 * 11 - 4 * 35


def test_unit_counts():
    K = quadratic_field(-4)
    assert oracles.residue_unit_count(K.ideal(5)) == 16
    assert oracles.euler_phi_ideal(K.ideal(5)) == 16


def test_point_count_hasse_bound():
    for ell in (5, 7, 13, 17):
        n = oracles.count_points_naive((0, -1, 1, -10, -20), ell)
        assert abs(ell + 1 - n) ** 2 <= 4 * ell

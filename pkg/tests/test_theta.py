import inspect

import pytest

from anticyc import catalog, oracles, theta
from anticyc.arith import is_prime
from anticyc.errors import InputError
from anticyc.heckechar import trivial_character
from anticyc.iqfield import quadratic_field
from anticyc.theta import (hecke_recursion_check, insensitive_indices, p_stabilize, specialization_compare,
                           theta_qexp, unconstrained_indices)


def test_coefficients_do_not_come_from_the_recursion():
    src = inspect.getsource(theta.theta_qexp)
    assert "hecke_recursion_check" not in src and "insensitive" not in src


@pytest.mark.parametrize("curve", [(0, 0, 0, 4, 0), (0, 0, 0, -1, 0)])
def test_weight_two_cm_form_matches_point_counts(curve):
    q = theta_qexp(catalog.character("i/cm32"), 300)
    assert q.weight == 2 and q.level == 32
    for p in range(3, 300):
        if is_prime(p):
            assert q[p] == q.ring(p + 1 - oracles.count_points_naive(curve, p))


def test_ideal_counts_give_coefficients_of_trivial_theta():
    K = quadratic_field(-4)
    counts = {n: len(v) for n, v in K.enumerate_ideals(50).items()}
    q = theta_qexp(catalog.character("i/w1_mod3"), 50)
    # weight one: |c_n| is bounded by the number of ideals of norm n
    for n in range(1, 51):
        assert (q[n] == q.ring.zero) or counts.get(n, 0) > 0


@pytest.mark.parametrize("name", catalog.THETA_CHARACTERS)
def test_eigenform_relations_hold(name):
    rep = hecke_recursion_check(theta_qexp(catalog.character(name), 300))
    assert rep.passed and rep.relations_checked > 100


def test_a_bumped_coefficient_is_caught():
    q = theta_qexp(catalog.character("i/psi0_5"), 200)
    bumped = q.with_coefficient(13, q[13] + q.ring.one)
    rep = hecke_recursion_check(bumped)
    assert not rep.passed and rep.violation is not None


def test_invisible_indices_are_really_invisible():
    q = theta_qexp(catalog.character("sqrt-7/w2_p2sq"), 150)
    hidden = insensitive_indices(q)
    assert set(unconstrained_indices(150, q.level)) <= set(hidden)
    for n in hidden:
        assert hecke_recursion_check(q.with_coefficient(n, q[n] + q.ring.one)).passed


def test_bound_must_be_positive():
    with pytest.raises(InputError):
        theta_qexp(catalog.character("i/psi0_5"), 0)


def test_stabilization_is_a_up_eigenvector_and_inverts():
    q = theta_qexp(catalog.character("i/psi0_5^2"), 100)  # level 20, so 13 is good
    st = p_stabilize(q, 13, 8)
    assert st.up_eigen_check()
    restored = st.un_stabilize()
    emb = q.ring.padic_embedding(13, 8)
    assert all(restored[n] == emb(q[n]) for n in range(1, 101))


def test_family_specialisations_agree():
    xi = trivial_character(quadratic_field(-4), 4)
    for k in (2, 3):
        cmp = specialization_compare(xi, 5, k, 60, 6)
        assert cmp.passed and cmp.min_agreement == 6


@pytest.mark.parametrize("name", ["i/psi0_5", "i/cm32", "sqrt-7/w2_p2sq", "sqrt-11/w2_p3"])
def test_tampered_c6_fails_at_the_pair_two_three(name):
    q = theta_qexp(catalog.character(name), 100)
    rep = hecke_recursion_check(q.with_coefficient(6, q[6] + q.ring.one))
    assert not rep.passed and rep.violation == {"kind": "multiplicative", "m": 2, "n": 3}


@pytest.mark.parametrize("name,k", [("i/psi0_5^4", 5), ("i/psi0_5^5", 6)])
def test_higher_weights_pass(name, k):
    q = theta_qexp(catalog.character(name), 2000)
    assert q.weight == k and hecke_recursion_check(q).passed


def test_weight_one_is_flagged():
    assert theta_qexp(catalog.character("i/w1_mod3"), 20).to_json()["flags"] == ["weight-one"]
    assert theta_qexp(catalog.character("i/cm32"), 20).to_json()["flags"] == []


def test_large_prime_coefficients_lie_outside_every_relation():
    # c_l for a prime l > B/2 only meets c_1, so no recursion check can see it change
    B = 200
    q = theta_qexp(catalog.character("i/cm32"), B)
    for ell in (101, 103, 107, 109, 113):
        assert ell in insensitive_indices(q)
        assert hecke_recursion_check(q.with_coefficient(ell, q[ell] + q.ring.one)).passed

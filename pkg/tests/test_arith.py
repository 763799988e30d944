from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from anticyc.arith import (FiniteAbelianGroup, PadicInt, ResidueRing, factor, kronecker_symbol, padic_exp,
                           padic_log, padic_root, smith_normal_form, teichmuller, value_ring)
from anticyc.errors import InputError, NoRoot, PreconditionFailed


def _matmul(A, B):
    return [[sum(A[i][k] * B[k][j] for k in range(len(B))) for j in range(len(B[0]))] for i in range(len(A))]


def test_smith_form_transforms_reproduce_the_diagonal():
    M = [[2, 4, 4], [-6, 6, 12], [10, -4, -16]]
    snf = smith_normal_form(M)
    assert snf.invariants == (2, 6, 12)
    D = _matmul(_matmul([list(r) for r in snf.left], M), [list(r) for r in snf.right])
    assert all(D[i][j] == (snf.invariants[i] if i == j else 0) for i in range(3) for j in range(3))


def test_finite_group_rejects_broken_chains():
    with pytest.raises(InputError):
        FiniteAbelianGroup([4, 6])
    assert FiniteAbelianGroup([1, 2, 4]).invariants == (2, 4)


def test_kronecker_symbol_matches_small_table():
    # (-4/p) = 1 iff p = 1 mod 4
    for ell in (3, 5, 7, 13, 17, 19):
        assert kronecker_symbol(-4, ell) == (1 if ell % 4 == 1 else -1)
    assert kronecker_symbol(-7, 2) == 1
    assert kronecker_symbol(-3, 2) == -1


def test_factor_round_trip():
    n = 2 ** 5 * 3 * 7 ** 2 * 101
    out = 1
    for p, e in factor(n).items():
        out *= p ** e
    assert out == n


def test_padic_inverse_and_fraction_coercion():
    x = PadicInt(Fraction(1, 3), 5, 10)
    assert x * PadicInt(3, 5, 10) == PadicInt(1, 5, 10)


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13, 97])
def test_teichmuller_is_a_root_of_unity(p):
    for a in range(1, p):
        w = teichmuller(a, p, 15)
        assert w ** (p - 1) == PadicInt(1, p, 15)
        assert w.value % p == a


def test_log_exp_inverse_on_principal_units():
    u = PadicInt(1 + 5 * 7, 5, 12)
    assert padic_exp(padic_log(u)) == u


@settings(max_examples=200, deadline=None)
@given(st.sampled_from([3, 5, 7, 13]), st.integers(min_value=0, max_value=10 ** 12))
def test_square_root_of_principal_unit_round_trips(p, t):
    u = PadicInt(1 + p * t, p, 20)
    r = padic_root(u, 2)
    assert r * r == u and r.value % p == 1


def test_root_without_seed_needs_principal_unit():
    with pytest.raises(NoRoot):
        padic_root(PadicInt(2, 5, 5), 2)


def test_value_ring_zeta_has_exact_order():
    R = value_ring(-4, 12)
    z = R.zeta
    powers = [z ** k for k in range(1, 13)]
    assert powers[-1] == R.one and all(x != R.one for x in powers[:-1])


def test_padic_embedding_requires_order_dividing_p_minus_1():
    with pytest.raises(PreconditionFailed):
        value_ring(-4, 12).padic_embedding(5, 3)
    emb = value_ring(-4, 4).padic_embedding(5, 6)
    i = emb(value_ring(-4, 4)((0, 1)))
    assert (i * i).value == (-1) % 5 ** 6


def test_residue_ring_reduces_coordinates():
    R = value_ring(-4, 4)
    Rm = ResidueRing(R, 6)
    assert Rm(R(7)) == Rm(R(1))
    assert Rm(R(6)).is_zero()

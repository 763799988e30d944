import pytest

from anticyc import oracles
from anticyc.errors import InputError, NotPrincipal
from anticyc.iqfield import is_fundamental_discriminant, quadratic_field, reduced_forms


@pytest.mark.parametrize("D,h", [(-3, 1), (-4, 1), (-7, 1), (-8, 1), (-15, 2), (-20, 2), (-23, 3), (-47, 5),
                                 (-71, 7), (-163, 1), (-167, 11)])
def test_class_numbers(D, h):
    assert quadratic_field(D).class_number == h


def test_class_numbers_agree_with_brute_force_below_200():
    for D in range(-3, -200, -1):
        if is_fundamental_discriminant(D):
            assert quadratic_field(D).class_number == oracles.reduced_form_count(D) == len(reduced_forms(D))


def test_non_fundamental_discriminant_rejected():
    with pytest.raises(InputError):
        quadratic_field(-12)


def test_ideal_norms_and_factorization():
    K = quadratic_field(-4)
    I = K.ideal(5) * K.ideal((1, 1)) ** 3
    assert I.norm == 25 * 8
    rebuilt = K.unit_ideal
    for P, e in I.factor():
        rebuilt = rebuilt * P ** e
    assert rebuilt == I


def test_splitting_types():
    K = quadratic_field(-7)
    assert K.splitting_type(2) == "split"
    assert K.splitting_type(3) == "inert"
    assert K.splitting_type(7) == "ramified"
    P, Q = K.prime_ideals_above(11)
    assert P * Q == K.ideal(11) and P.conj() == Q


def test_principal_generator_generates():
    K = quadratic_field(-7)
    for P in K.prime_ideals_above(43):
        g = K.principal_generator(P)
        assert K.ideal(g) == P and K.norm(g) == 43


def test_nonprincipal_ideal_has_no_generator():
    K = quadratic_field(-23)
    P = K.prime_ideals_above(2)[0]
    with pytest.raises(NotPrincipal):
        K.principal_generator(P)
    assert K.is_principal(P ** 3)


def test_ideal_counts_by_norm():
    K = quadratic_field(-4)
    counts = {n: len(v) for n, v in K.enumerate_ideals(30).items()}
    # r_2(n) / 4 for Q(i)
    assert counts[5] == 2 and counts[25] == 3 and counts[3] == 0 and counts[9] == 1 and counts[2] == 1


def test_class_group_of_forms_composition():
    K = quadratic_field(-23)
    cl = K.class_group
    P = cl.generator_primes()[0]
    x = cl.class_of(P)
    assert cl.class_of(P ** 3) == cl.group.identity()
    assert x != cl.group.identity()

import itertools

import pytest

from anticyc import catalog
from anticyc.errors import InputError, NotCoprime, NotPrincipalField, UnitIncompatible
from anticyc.heckechar import HeckeCharacter, build_character, psi0, trivial_character
from anticyc.iqfield import quadratic_field


def _units_one_mod(psi, bound=12):
    K, f = psi.field, psi.conductor
    one = f.reduce((1, 0))
    for x, y in itertools.product(range(-bound, bound + 1), repeat=2):
        if (x, y) != (0, 0) and f.reduce((x, y)) == one and K.ideal((x, y)).is_coprime(f):
            yield (x, y)


@pytest.mark.parametrize("name", ["i/psi0_5", "sqrt-7/w2_p2sq", "sqrt-11/w2_p3"])
def test_principal_ideals_one_mod_conductor_map_to_their_generator(name):
    psi = catalog.character(name)
    assert psi.infinity_type == (-1, 0)
    seen = 0
    for alpha in _units_one_mod(psi):
        assert psi.evaluate(psi.field.ideal(alpha)) == psi.ring(alpha)
        seen += 1
    assert seen > 5


@pytest.mark.parametrize("name", catalog.THETA_CHARACTERS)
def test_multiplicative_on_coprime_ideals(name):
    psi = catalog.character(name)
    K = psi.field
    ideals = [I for v in K.enumerate_ideals(40, coprime_to=psi.conductor).values() for I in v]
    for I, J in itertools.product(ideals[:12], repeat=2):
        assert psi.evaluate(I * J) == psi.evaluate(I) * psi.evaluate(J)


def test_conjugate_and_inverse_flip_infinity_type():
    psi = catalog.character("i/psi0_5")
    assert psi.conjugate().infinity_type == (0, -1)
    assert psi.inverse().infinity_type == (1, 0)
    I = psi.field.prime_ideals_above(13)[0]
    assert psi.evaluate(I) * psi.inverse().evaluate(I) == psi.ring(13) ** 0 * psi.ring.one


def test_json_round_trip_preserves_values():
    psi = catalog.character("sqrt-7/w1_p2cube")
    again = HeckeCharacter.from_json(psi.dumps())
    assert again.dumps() == psi.dumps()
    for I in psi.field.ideals_of_norm(29):
        assert again.evaluate(I) == psi.evaluate(I)


def test_unit_incompatible_finite_part_is_rejected():
    f = catalog.character("i/psi0_5").conductor
    # type (-1, 0) needs eps(i) = i, the zero exponent gives eps(i) = 1
    with pytest.raises(UnitIncompatible):
        build_character(quadratic_field(-4), f, (-1, 0), 4, [0])


def test_class_number_above_one_needs_root_values():
    K = quadratic_field(-23)
    with pytest.raises(NotPrincipalField):
        HeckeCharacter(K, K.unit_ideal, (0, 0), 2, [])
    chi = trivial_character(K, 2)
    assert all(chi.evaluate(I) == chi.ring.one for I in K.ideals_of_norm(6))


def test_with_modulus_requires_a_multiple():
    psi = catalog.character("i/psi0_5")
    with pytest.raises(InputError):
        psi.with_modulus(psi.field.ideal(3))
    wider = psi.with_modulus(psi.conductor * psi.field.ideal(3))
    P = psi.field.prime_ideals_above(13)[0]
    assert wider.evaluate(P) == psi.evaluate(P)


def test_avatar_of_a_norm_coprime_ideal_and_bad_prime():
    psi = psi0(quadratic_field(-4), 5)
    av = psi.padic_avatar(psi.field.ideal(3), 5, 8)
    assert av.value.value % 5 == 1 and av.gamma_exponent is not None
    with pytest.raises(NotCoprime):
        psi.padic_avatar(psi.field.prime_ideals_above(5)[0], 5, 8)


def test_condition_spade_branches():
    assert catalog.character("i/cm32").condition_spade(5) == (True, "(p, f) = 1")
    ok, why = catalog.character("i/psi0_5").condition_spade(5)
    assert ok and "differs" in why
    with pytest.raises(InputError):
        catalog.character("i/psi0_5^2").condition_spade(5)

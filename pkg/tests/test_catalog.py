from anticyc import catalog
from anticyc.arith import is_prime
from anticyc.heckechar import psi0
from anticyc.iqfield import quadratic_field


def test_every_named_character_builds_deterministically():
    for name in catalog.THETA_CHARACTERS:
        a = catalog.character(name)
        b = catalog._build(name)
        assert a.dumps() == b.dumps()


def test_theta_catalog_spans_weights_and_fields():
    chars = [catalog.character(n) for n in catalog.THETA_CHARACTERS]
    assert {c.field.disc for c in chars} >= {-4, -7, -11}
    assert {c.weight for c in chars} >= {1, 2, 3, 4}


def test_powers_of_psi0():
    base = psi0(quadratic_field(-4), 5)
    sq = catalog.character("i/psi0_5^2")
    for I in base.field.ideals_of_norm(13):
        assert sq.evaluate(I) == base.evaluate(I) ** 2


def test_curve_levels_carry_exactly_the_bad_primes():
    for label, (E, level) in catalog.CURVES.items():
        bad = [ell for ell in range(2, 60) if is_prime(ell) and not E.has_good_reduction(ell)]
        assert bad == [ell for ell in range(2, 60) if is_prime(ell) and level % ell == 0], label

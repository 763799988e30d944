"""Named characters, curves and configurations used by the suite and the CLI.

Characters are found by a deterministic search over exponent vectors on
the canonical generators of (O/f)^x, so every entry is reproducible.
"""

from __future__ import annotations

import itertools
import math
from typing import Callable

from .classfield import ResidueUnitGroup
from .errors import InputError, UnitIncompatible
from .euler import EllipticCurve, FormData
from .heckechar import HeckeCharacter, psi0
from .iqfield import IQField, Ideal, quadratic_field


def first_compatible(K: IQField, conductor: Ideal, infinity_type, order: int,
                     accept: Callable[[HeckeCharacter], bool] = lambda psi: True) -> HeckeCharacter:
    """The lexicographically first unit-compatible character passing ``accept``."""
    units = ResidueUnitGroup(K, conductor)
    ranges = [range(0, order, order // math.gcd(order, d)) for d in units.orders]
    for exps in itertools.product(*ranges):
        try:
            psi = HeckeCharacter(K, conductor, infinity_type, order, list(exps))
        except UnitIncompatible:
            continue
        if accept(psi):
            return psi
    raise InputError(f"no character of type {infinity_type} and modulus {conductor} matches")


def _nontrivial(psi: HeckeCharacter) -> bool:
    return any(psi.exponents)


def _above(D: int, p: int, e: int = 1) -> Ideal:
    return quadratic_field(D).prime_ideals_above(p)[0] ** e


_BUILDERS: dict[str, Callable[[], HeckeCharacter]] = {
    "i/psi0_5": lambda: psi0(quadratic_field(-4), 5),
    **{f"i/psi0_5^{e}": (lambda e=e: psi0(quadratic_field(-4), 5) ** e) for e in range(2, 6)},
    "i/cm32": lambda: first_compatible(quadratic_field(-4), quadratic_field(-4).ideal((1, 1)) ** 3, (-1, 0), 4),
    "i/w1_mod3": lambda: first_compatible(quadratic_field(-4), quadratic_field(-4).ideal(3), (0, 0), 2, _nontrivial),
    "sqrt-7/w2_p2sq": lambda: first_compatible(quadratic_field(-7), _above(-7, 2, 2), (-1, 0), 2),
    "sqrt-7/w3_unramified": lambda: first_compatible(quadratic_field(-7), quadratic_field(-7).unit_ideal, (-2, 0), 2),
    "sqrt-7/w1_p2cube": lambda: first_compatible(quadratic_field(-7), _above(-7, 2, 3), (0, 0), 2, _nontrivial),
    "sqrt-11/w2_p3": lambda: first_compatible(quadratic_field(-11), _above(-11, 3), (-1, 0), 2),
    "sqrt-11/w4_p3": lambda: first_compatible(quadratic_field(-11), _above(-11, 3), (-3, 0), 2),
}

NAMES = sorted(_BUILDERS)


def _build(name: str) -> HeckeCharacter:
    if name not in _BUILDERS:
        raise InputError(f"unknown catalog character {name!r}; known: {', '.join(NAMES)}")
    return _BUILDERS[name]()


_CACHE: dict[str, HeckeCharacter] = {}


def character(name: str) -> HeckeCharacter:
    if name not in _CACHE:
        _CACHE[name] = _build(name)
    return _CACHE[name]


THETA_CHARACTERS = [
    "i/psi0_5", "i/cm32", "i/psi0_5^2", "i/psi0_5^3", "i/w1_mod3",
    "sqrt-7/w2_p2sq", "sqrt-7/w3_unramified", "sqrt-7/w1_p2cube",
    "sqrt-11/w2_p3", "sqrt-11/w4_p3",
]

CURVES = {
    "11a1": (EllipticCurve(0, -1, 1, -10, -20), 11),
    "14a1": (EllipticCurve(1, 0, 1, 4, -6), 14),
    "19a1": (EllipticCurve(0, 1, 1, -9, -15), 19),
    "37a1": (EllipticCurve(0, 0, 1, -1, 0), 37),
    "43a1": (EllipticCurve(0, 1, 1, 0, 0), 43),
}


def form(label: str) -> FormData:
    curve, level = CURVES[label]
    return FormData.from_curve(curve, level)


# (field, curve, psi1, psi2, m, p)
TAME_CONFIGS = [
    (-7, "11a1", "sqrt-7/w2_p2sq", "sqrt-7/w2_p2sq", 1, 5),
    (-4, "11a1", "i/cm32", "i/cm32", 41, 5),
    (-4, "37a1", "i/cm32", "i/cm32", 53, 13),
    (-4, "19a1", "i/cm32", "i/cm32", 265, 13),
    (-11, "43a1", "sqrt-11/w2_p3", "sqrt-11/w2_p3", 1, 13),
]

# (field, m, ell, p)
KEYDIAGRAM_CONFIGS = [
    (-4, 1, 41, 5), (-4, 41, 13, 5), (-4, 1, 53, 13), (-4, 1, 157, 13),
    (-4, 53, 5, 13), (-7, 1, 53, 13), (-7, 2, 53, 13), (-7, 1, 11, 5),
    (-7, 1, 29, 7), (-11, 1, 31, 5),
]

# (field, m, p)
DECOMPOSITION_CONFIGS = [
    (-4, 1, 5), (-4, 41, 5), (-4, 53, 13), (-4, 65, 13), (-4, 265, 13),
    (-7, 2, 13), (-7, 11, 5), (-7, 22, 13), (-7, 29, 13), (-7, 53, 13),
    (-11, 3, 5), (-11, 31, 5),
]

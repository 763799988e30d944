"""Ray and ring class groups of an imaginary quadratic field.

The ray class group H_n is presented on generators

* lifts gamma_i of cyclic generators of (O_K/n)^x (the image of principal
  ideals), and
* prime ideals g_j representing Smith generators of Cl(K),

with relations d_i*gamma_i = 0, the discrete log of the unit generator of
O_K^x, and h_j*g_j = [(generator of g_j^h_j)]. The ring class group H[m] is
the quotient of H_(m) by the classes of rational integers prime to m. Every
ideal map goes through discrete logarithms in (O_K/n)^x and in Cl(K).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from functools import cached_property, lru_cache
from typing import Callable, Hashable, Iterable, Iterator, Mapping

from .arith import (
    AbelianHom,
    FiniteAbelianGroup,
    PresentedGroup,
    _egcd,
    abelian_structure,
    factor,
    is_prime,
    lcm,
    smith_normal_form,
)
from .errors import InputError, NotCoprime, PreconditionFailed, ResourceLimit
from .iqfield import Elem, IQField, Ideal, quadratic_field


@dataclass(frozen=True)
class Limits:
    """Size caps for residue-group computations."""

    norm_cap: int = 10 ** 6
    enumeration_limit: int = 10 ** 5


DEFAULT_LIMITS = Limits()


# ---------------------------------------------------------------------------
# unit groups of residue rings

def _mul_mod(K: IQField, ideal: Ideal) -> Callable[[Elem, Elem], Elem]:
    def mul(x, y):
        return ideal.reduce(K.mul(x, y))
    return mul


def _power_mod(K: IQField, ideal: Ideal, x: Elem, k: int) -> Elem:
    result = ideal.reduce((1, 0))
    base = ideal.reduce(x)
    while k:
        if k & 1:
            result = ideal.reduce(K.mul(result, base))
        k >>= 1
        if k:
            base = ideal.reduce(K.mul(base, base))
    return result


class LocalUnitGroup:
    """(O_K/P^e)^x with Smith generators and discrete logarithms."""

    def __init__(self, K: IQField, prime: Ideal, e: int, limits: Limits = DEFAULT_LIMITS):
        self.field, self.prime, self.exponent = K, prime, e
        self.ideal = prime ** e
        N = self.ideal.norm
        if N > limits.norm_cap:
            raise ResourceLimit(f"norm {N} exceeds the configured cap {limits.norm_cap}")
        one = self.ideal.reduce((1, 0))
        self._one = one
        mul = _mul_mod(K, self.ideal)
        if N <= limits.enumeration_limit:
            units = [r for r in K.residue_ring_elements(self.ideal) if not prime.contains(r)]
            st = abelian_structure(units, mul, one)
            self.invariants = list(st.group.invariants)
            self.generators = st.generators
            self._table = st.dlog
        elif e == 1:
            self._init_cyclic()
        else:
            raise ResourceLimit(f"(O/{self.ideal})^x too large to enumerate and not cyclic-by-construction")

    def _init_cyclic(self):
        K, I = self.field, self.ideal
        q = I.norm
        n = q - 1
        qs = list(factor(n))
        for r in K.residue_ring_elements(I):
            if r == (0, 0):
                continue
            if all(_power_mod(K, I, r, n // s) != self._one for s in qs):
                self.generators = [r]
                break
        self.invariants = [n]
        self._table = None
        m = math.isqrt(n) + 1
        baby = {}
        x = self._one
        g = self.generators[0]
        for j in range(m):
            baby.setdefault(x, j)
            x = I.reduce(K.mul(x, g))
        self._baby = baby
        self._giant = _power_mod(K, I, g, n - m)  # g^{-m}
        self._m = m

    @property
    def order(self) -> int:
        return math.prod(self.invariants)

    def dlog(self, x: Elem) -> tuple[int, ...]:
        r = self.ideal.reduce(x)
        if self.prime.contains(r):
            raise NotCoprime(f"{x} is not a unit modulo {self.ideal}")
        if self._table is not None:
            return self._table[r]
        K, I = self.field, self.ideal
        y = r
        for i in range(self._m + 1):
            if y in self._baby:
                return ((i * self._m + self._baby[y]) % self.invariants[0],)
            y = I.reduce(K.mul(y, self._giant))
        raise AssertionError("discrete log not found")  # pragma: no cover


def coprime_split(I: Ideal, J: Ideal) -> tuple[Elem, Elem]:
    """(x, y) with x in I, y in J and x + y = 1, for coprime I, J."""
    g, u, v = _egcd(I.a, J.a)
    if g == 1:
        return (u * I.a, 0), (v * J.a, 0)
    rows = [list(v) for v in I.basis] + [list(v) for v in J.basis]
    snf = smith_normal_form(rows)
    if snf.invariants != (1, 1):
        raise NotCoprime(f"{I} and {J} are not coprime")
    V = snf.right
    mu = [V[0][0], V[0][1], 0, 0]  # (1, 0) * V
    lam = [sum(mu[k] * snf.left[k][i] for k in range(4)) for i in range(4)]
    x = (lam[0] * rows[0][0] + lam[1] * rows[1][0], lam[0] * rows[0][1] + lam[1] * rows[1][1])
    y = (1 - x[0], -x[1])
    if not (I.contains(x) and J.contains(y)):  # pragma: no cover
        raise AssertionError("coprime splitting failed")
    return x, y


class ResidueUnitGroup:
    """(O_K/n)^x as a product of the local groups at the prime powers of n.

    Coordinates are concatenated local Smith coordinates; ``orders`` lists the
    orders of the corresponding cyclic generators (not a divisibility chain).
    """

    def __init__(self, K: IQField, modulus: Ideal, limits: Limits = DEFAULT_LIMITS):
        self.field, self.modulus = K, modulus
        if modulus.norm > limits.norm_cap:
            raise ResourceLimit(f"norm {modulus.norm} exceeds the configured cap {limits.norm_cap}")
        self.locals: list[LocalUnitGroup] = [local_unit_group(K, P, e, limits) for P, e in modulus.factor()]
        self.orders: list[int] = []
        self.generators: list[Elem] = []
        for loc in self.locals:
            # y = 1 mod the local ideal, y = 0 mod the rest of the modulus
            y = (1, 0) if len(self.locals) == 1 else coprime_split(modulus.divide(loc.ideal), loc.ideal)[0]
            for g, d in zip(loc.generators, loc.invariants):
                t = K.mul((g[0] - 1, g[1]), y)
                self.orders.append(d)
                self.generators.append(modulus.reduce((t[0] + 1, t[1])))

    @property
    def order(self) -> int:
        return math.prod(self.orders)

    def dlog(self, x: Elem) -> tuple[int, ...]:
        out: list[int] = []
        for loc in self.locals:
            out.extend(loc.dlog(x))
        return tuple(out)

    def element_order(self, v: Iterable[int]) -> int:
        return lcm(*(d // math.gcd(a, d) for a, d in zip(v, self.orders)))


@lru_cache(maxsize=4096)
def _local_cached(disc: int, hnf: tuple, e: int, limits: Limits) -> LocalUnitGroup:
    K = quadratic_field(disc)
    return LocalUnitGroup(K, Ideal(K, *hnf), e, limits)


def local_unit_group(K: IQField, prime: Ideal, e: int, limits: Limits = DEFAULT_LIMITS) -> LocalUnitGroup:
    return _local_cached(K.disc, prime.hnf, e, limits)


# ---------------------------------------------------------------------------
# ray and ring class groups

class RayClassGroup:
    """H_n together with its ideal map and the projection to Cl(K)."""

    def __init__(self, K: IQField, modulus: Ideal, extra_relations: list[list[int]] | None = None,
                 limits: Limits = DEFAULT_LIMITS):
        self.field, self.modulus = K, modulus
        self.units = ResidueUnitGroup(K, modulus, limits)
        cl = K.class_group
        self.class_group = cl
        self.class_primes = cl.generator_primes(avoid=modulus.norm)
        r, s = len(self.units.orders), cl.group.rank
        self._r, self._s = r, s
        rels: list[list[int]] = []
        for i, d in enumerate(self.units.orders):
            rels.append([d if k == i else 0 for k in range(r + s)])
        rels.append(list(self.units.dlog(K.unit_generator)) + [0] * s)
        self._class_prime_powers: list[Elem] = []
        for j, (P, h) in enumerate(zip(self.class_primes, cl.group.invariants)):
            gamma = K.principal_generator(P ** h)
            self._class_prime_powers.append(gamma)
            row = [-v for v in self.units.dlog(gamma)] + [h if k == j else 0 for k in range(s)]
            rels.append(row)
        self.base_relations = rels
        self.presentation = PresentedGroup(r + s, rels + list(extra_relations or []))
        self.group: FiniteAbelianGroup = self.presentation.group

    def __repr__(self):
        return f"{type(self).__name__}({self.modulus}: {list(self.group.invariants)})"

    @property
    def order(self) -> int:
        return self.group.order()

    # ideal map -----------------------------------------------------------
    def presentation_vector(self, ideal: Ideal) -> list[int]:
        K = self.field
        if not ideal.is_coprime(self.modulus):
            raise NotCoprime(f"{ideal} is not coprime to {self.modulus}")
        x = self.class_group.class_of(ideal)
        twisted = ideal
        scale = 1
        for P, xj in zip(self.class_primes, x):
            if xj:
                twisted = twisted * P.conj() ** xj
                scale *= P.norm ** xj
        beta = K.principal_generator(twisted)
        inv = pow(scale, -1, self.modulus.a)  # modulus contains modulus.a, scale prime to it
        beta = self.modulus.reduce((beta[0] * inv, beta[1] * inv))
        return list(self.units.dlog(beta)) + list(x)

    def element(self, ideal: Ideal) -> tuple:
        """Class of an ideal coprime to the modulus."""
        return self.presentation.to_group(self.presentation_vector(ideal))

    def element_of_residue(self, beta: Elem) -> tuple:
        """Class of the principal ideal (beta) for beta prime to the modulus."""
        return self.presentation.to_group(list(self.units.dlog(beta)) + [0] * self._s)

    def generator_ideals(self) -> list[Ideal]:
        """Ideals whose classes are the presentation generators."""
        K = self.field
        return [K.ideal(g) for g in self.units.generators] + list(self.class_primes)

    def hom_to(self, other: RayClassGroup) -> AbelianHom:
        """The natural map to a class group of a coarser modulus."""
        images = [other.element(I) for I in self.generator_ideals()]
        return self.presentation.hom_from_images(other.group, images)

    @cached_property
    def to_class_group(self) -> AbelianHom:
        images = [self.class_group.group.identity()] * self._r + self.class_group.group.generators()
        return self.presentation.hom_from_images(self.class_group.group, images)

    def representative_ideals(self, bound: int = 2000) -> dict[tuple, Ideal]:
        """Smallest-norm ideal in each class among ideals of norm <= bound."""
        out: dict[tuple, Ideal] = {}
        for I in self.field.iter_ideals(bound, self.modulus if self.modulus.norm > 1 else None):
            g = self.element(I)
            out.setdefault(g, I)
            if len(out) == self.order:
                break
        return out

    # exactness ------------------------------------------------------------
    def exactness_report(self) -> dict:
        K = self.field
        U = self.units
        unit_image = U.element_order(U.dlog(K.unit_generator)) if U.orders else 1
        iota = [self.element_of_residue(g) for g in U.generators]
        kernel = self.group.subgroup_order(iota)
        proj = self.to_class_group
        surj = self.class_group.group.subgroup_order([proj(g) for g in self.group.generators()])
        h = self.class_group.order
        return {
            "order": self.order,
            "units_order": U.order,
            "unit_image": unit_image,
            "kernel_to_H1": kernel,
            "h": h,
            "cardinality_identity": self.order * unit_image == h * U.order,
            "kernel_matches": kernel * unit_image == U.order,
            "surjective_to_H1": surj == h,
        }

    def to_json(self) -> dict:
        reps = self.representative_ideals()
        gens = []
        for g in self.group.generators():
            I = reps.get(g)
            gens.append(I.to_json() if I is not None else None)
        return {
            "modulus": self.modulus.to_json(),
            "invariants": list(self.group.invariants),
            "generators": gens,
        }


class RingClassGroup(RayClassGroup):
    """Pic(Z + m O_K) as the quotient of H_(m) by rational residues."""

    def __init__(self, K: IQField, m: int, limits: Limits = DEFAULT_LIMITS):
        if m < 1:
            raise InputError("conductor must be positive")
        if math.gcd(m, K.disc) != 1:
            raise PreconditionFailed("ring class conductor must be coprime to the discriminant")
        self.conductor = m
        modulus = K.ideal(m)
        units = ResidueUnitGroup(K, modulus, limits)
        extra = []
        if m > 1:
            residues = [a for a in range(1, m) if math.gcd(a, m) == 1]
            st = abelian_structure(residues, lambda a, b: a * b % m, 1 % m)
            s = K.class_group.group.rank
            extra = [list(units.dlog((a, 0))) + [0] * s for a in st.generators]
        super().__init__(K, modulus, extra, limits)

    def exactness_report(self) -> dict:
        """1 -> (O/m)^x / (Z/m)^x O^x -> Pic(O_m) -> Cl(K) -> 1, counted directly."""
        K, U, m = self.field, self.units, self.conductor
        modulus = self.modulus
        rational_units = {modulus.reduce(K.mul((a, 0), u)) for a in range(1, m + 1) if math.gcd(a, m) == 1
                          for u in K.units} if m > 1 else {(0, 0)}
        sub = len(rational_units)
        iota = [self.element_of_residue(g) for g in U.generators]
        kernel = self.group.subgroup_order(iota)
        proj = self.to_class_group
        h = self.class_group.order
        surj = self.class_group.group.subgroup_order([proj(g) for g in self.group.generators()])
        return {
            "order": self.order,
            "units_order": U.order,
            "rational_and_unit_residues": sub,
            "kernel_to_H1": kernel,
            "h": h,
            "cardinality_identity": self.order * sub == h * U.order,
            "kernel_matches": kernel * sub == U.order,
            "surjective_to_H1": surj == h,
        }

    def formula_order(self) -> int:
        K, m = self.field, self.conductor
        value = K.class_number * m
        num, den = 1, 1
        for ell in factor(m) if m > 1 else {}:
            k = K.splitting_type(ell)
            chi = {"split": 1, "inert": -1, "ramified": 0}[k]
            num *= ell - chi
            den *= ell
        index = K.w // 2 if m > 1 else 1
        return value * num // den // index


@lru_cache(maxsize=8192)
def _ray_cached(disc: int, hnf: tuple, limits: Limits) -> RayClassGroup:
    K = quadratic_field(disc)
    return RayClassGroup(K, Ideal(K, *hnf), None, limits)


def ray_class_group(K: IQField, modulus: Ideal, limits: Limits = DEFAULT_LIMITS) -> RayClassGroup:
    return _ray_cached(K.disc, modulus.hnf, limits)


@lru_cache(maxsize=1024)
def _ring_cached(disc: int, m: int, limits: Limits) -> RingClassGroup:
    return RingClassGroup(quadratic_field(disc), m, limits)


def ring_class_group(K: IQField, m: int, limits: Limits = DEFAULT_LIMITS) -> RingClassGroup:
    return _ring_cached(K.disc, m, limits)


def p_part(G: FiniteAbelianGroup, p: int) -> tuple[FiniteAbelianGroup, AbelianHom]:
    return G.p_part(p)


# ---------------------------------------------------------------------------
# products and group rings

class ProductGroup:
    """G1 x G2 with elements stored as pairs."""

    def __init__(self, first: FiniteAbelianGroup, second: FiniteAbelianGroup):
        self.first, self.second = first, second

    def identity(self):
        return (self.first.identity(), self.second.identity())

    def op(self, x, y):
        return (self.first.op(x[0], y[0]), self.second.op(x[1], y[1]))

    def inverse(self, x):
        return (self.first.inverse(x[0]), self.second.inverse(x[1]))

    def order(self) -> int:
        return self.first.order() * self.second.order()

    def elements(self) -> Iterator:
        for a in self.first.elements():
            for b in self.second.elements():
                yield (a, b)


class GroupRingElement:
    """Finitely supported map group element -> coefficient."""

    __slots__ = ("group", "coeffs")

    def __init__(self, group, coeffs: Mapping[Hashable, object] | None = None):
        self.group = group
        self.coeffs = {g: c for g, c in (coeffs or {}).items() if not _is_zero(c)}

    @classmethod
    def basis(cls, group, g, one=1) -> GroupRingElement:
        return cls(group, {g: one})

    def __add__(self, other: GroupRingElement) -> GroupRingElement:
        self._check(other)
        out = dict(self.coeffs)
        for g, c in other.coeffs.items():
            out[g] = out[g] + c if g in out else c
        return GroupRingElement(self.group, out)

    def __neg__(self):
        return GroupRingElement(self.group, {g: -c for g, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, GroupRingElement):
            return GroupRingElement(self.group, {g: c * other for g, c in self.coeffs.items()})
        self._check(other)
        out: dict = {}
        op = self.group.op
        for g, c in self.coeffs.items():
            for h, d in other.coeffs.items():
                k = op(g, h)
                v = c * d
                out[k] = out[k] + v if k in out else v
        return GroupRingElement(self.group, out)

    def __rmul__(self, scalar):
        return GroupRingElement(self.group, {g: scalar * c for g, c in self.coeffs.items()})

    def _check(self, other):
        if not isinstance(other, GroupRingElement) or other.group is not self.group and other.group != self.group:
            raise InputError("group ring elements over different groups")

    def augmentation(self, zero=0):
        total = zero
        for c in self.coeffs.values():
            total = total + c
        return total

    def pushforward(self, hom: Callable, target) -> GroupRingElement:
        out: dict = {}
        for g, c in self.coeffs.items():
            k = hom(g)
            out[k] = out[k] + c if k in out else c
        return GroupRingElement(target, out)

    def map_coefficients(self, f: Callable) -> GroupRingElement:
        return GroupRingElement(self.group, {g: f(c) for g, c in self.coeffs.items()})

    def support(self) -> list:
        return sorted(self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, GroupRingElement):
            return False
        keys = set(self.coeffs) | set(other.coeffs)
        return all(_is_zero(self.coeffs.get(k, 0) - other.coeffs.get(k, 0)) for k in keys)

    def __repr__(self):
        return f"GroupRingElement({dict(sorted(self.coeffs.items()))})"

    def to_json(self) -> list:
        return [[_json_key(g), _json_coef(c)] for g, c in sorted(self.coeffs.items())]


def _is_zero(c) -> bool:
    if hasattr(c, "is_zero"):
        return c.is_zero()
    return c == 0


def _json_key(g):
    if isinstance(g, tuple):
        return [_json_key(x) for x in g]
    return g


def _json_coef(c):
    if hasattr(c, "c"):
        return [str(x) for x in c.c]
    return str(c)


def group_ring_norm(source: RayClassGroup, target: RayClassGroup, p: int) -> Callable[[GroupRingElement], GroupRingElement]:
    """Coefficient-wise pushforward O[H_source^(p)] -> O[H_target^(p)]."""
    if not target.modulus.contains_ideal(source.modulus):
        raise InputError(f"{target.modulus} does not divide {source.modulus}")
    hom_p = source.hom_to(target).p_part(p)

    def norm(x: GroupRingElement) -> GroupRingElement:
        return x.pushforward(hom_p, hom_p.target)
    norm.hom = hom_p  # type: ignore[attr-defined]
    return norm


# ---------------------------------------------------------------------------
# the split decomposition and the diagonal projection

def designated_ideal(K: IQField, m: int) -> Ideal:
    """Product of the first HNF prime above each prime power dividing m."""
    ideal = K.unit_ideal
    for ell, e in (factor(m).items() if m > 1 else []):
        if K.splitting_type(ell) != "split":
            raise PreconditionFailed(f"prime {ell} of m={m} is not split in {K}")
        ideal = ideal * K.prime_ideals_above(ell)[0] ** e
    return ideal


class SplitDecomposition:
    """H_m^(p) = H_mf^(p) x H_mfbar^(p) and the projection pi_Delta to H[m]^(p).

    ``mf`` is the designated ideal of norm m; pass ``conjugate=True`` to use
    its conjugate instead.
    """

    def __init__(self, K: IQField, m: int, p: int, conjugate: bool = False,
                 limits: Limits = DEFAULT_LIMITS):
        if (6 * K.class_number) % p == 0:
            raise PreconditionFailed(f"p={p} divides 6*h_K={6 * K.class_number}")
        self.field, self.m, self.p = K, m, p
        mf = designated_ideal(K, m)
        if conjugate:
            mf = mf.conj()
        self.mf, self.mf_bar = mf, mf.conj()
        self.ray_m = ray_class_group(K, K.ideal(m), limits)
        self.ray_a = ray_class_group(K, self.mf, limits)
        self.ray_b = ray_class_group(K, self.mf_bar, limits)
        self.ring = ring_class_group(K, m, limits)
        self.Hm_p, self._proj_m = self.ray_m.group.p_part(p)
        self.Ha_p, self._proj_a = self.ray_a.group.p_part(p)
        self.Hb_p, self._proj_b = self.ray_b.group.p_part(p)
        self.Hring_p, self._proj_ring = self.ring.group.p_part(p)
        self.product = ProductGroup(self.Ha_p, self.Hb_p)
        self.res_a = self.ray_m.hom_to(self.ray_a).p_part(p)
        self.res_b = self.ray_m.hom_to(self.ray_b).p_part(p)
        images = [self.ring.element(I) for I in self.ray_m.generator_ideals()]
        self.quotient = self.ray_m.presentation.hom_from_images(self.ring.group, images).p_part(p)
        self._table: dict = {}
        for x in self.Hm_p.elements():
            pair = (self.res_a(x), self.res_b(x))
            if pair in self._table:
                raise AssertionError("restriction to H_mf x H_mfbar is not injective")
            self._table[pair] = self.quotient(x)
        self.restriction_bijective = len(self._table) == self.product.order()
        if not self.restriction_bijective:  # pragma: no cover
            raise AssertionError("restriction to H_mf x H_mfbar is not bijective")

    # classes in the components -------------------------------------------
    def class_a(self, ideal: Ideal) -> tuple:
        return self._proj_a(self.ray_a.element(ideal))

    def class_b(self, ideal: Ideal) -> tuple:
        return self._proj_b(self.ray_b.element(ideal))

    def class_ring(self, ideal: Ideal) -> tuple:
        return self._proj_ring(self.ring.element(ideal))

    def pair(self, ideal: Ideal) -> tuple:
        """[a] x [a] in H_mf^(p) x H_mfbar^(p)."""
        return (self.class_a(ideal), self.class_b(ideal))

    def delta(self, a: int) -> tuple:
        return self.pair(self.field.ideal(a))

    def pi_delta(self, pair: tuple) -> tuple:
        return self._table[pair]

    # group ring maps --------------------------------------------------------
    def xi_delta(self, f1: GroupRingElement, f2: GroupRingElement) -> GroupRingElement:
        out: dict = {}
        for g1, c1 in f1.coeffs.items():
            for g2, c2 in f2.coeffs.items():
                k = self._table[(g1, g2)]
                v = c1 * c2
                out[k] = out[k] + v if k in out else v
        return GroupRingElement(self.Hring_p, out)

    @cached_property
    def ring_conjugation(self) -> AbelianHom:
        """Complex conjugation on H[m]^(p), computed from conjugate ideals."""
        images = [self.ring.element(I.conj()) for I in self.ring.generator_ideals()]
        return self.ring.presentation.hom_from_images(self.ring.group, images).p_part(self.p)

    def xi_delta_c(self, f1: GroupRingElement, f2: GroupRingElement) -> GroupRingElement:
        """Variant with the second factor conjugated: g1 x g2 -> pi(g1 x 1) * c(pi(1 x g2))."""
        ida, idb = self.Ha_p.identity(), self.Hb_p.identity()
        G = self.Hring_p
        out: dict = {}
        for g1, c1 in f1.coeffs.items():
            base = self._table[(g1, idb)]
            for g2, c2 in f2.coeffs.items():
                k = G.op(base, self.ring_conjugation(self._table[(ida, g2)]))
                v = c1 * c2
                out[k] = out[k] + v if k in out else v
        return GroupRingElement(G, out)

    # verification -----------------------------------------------------------
    def verify(self, frob_primes: Iterable[int] = ()) -> dict:
        """Exactness of 1 -> (Z/m)^x(p) -> H_mf x H_mfbar -> H[m] -> 1 and Frobenius checks."""
        K, m = self.field, self.m
        deltas = {self.delta(a) for a in range(1, max(m, 2)) if math.gcd(a, m) == 1} if m > 1 else {self.product.identity()}
        zero = self.Hring_p.identity()
        kernel = {pair for pair, v in self._table.items() if v == zero}
        image = set(self._table.values())
        frob = {}
        for ell in frob_primes:
            if not is_prime(ell) or m % ell == 0 or K.splitting_type(ell) != "split":
                continue
            for L in K.prime_ideals_above(ell):
                frob[ell] = frob.get(ell, True) and self.pi_delta(self.pair(L)) == self.class_ring(L)
        return {
            "kernel_equals_delta": kernel == deltas,
            "surjective": len(image) == self.Hring_p.order(),
            "cardinality": len(kernel) * self.Hring_p.order() == self.product.order(),
            "restriction_bijective": self.restriction_bijective,
            "frobenius": all(frob.values()),
            "frobenius_primes": sorted(frob),
            "orders": {
                "H_m": self.Hm_p.order(),
                "H_mf": self.Ha_p.order(),
                "H_mfbar": self.Hb_p.order(),
                "H[m]": self.Hring_p.order(),
            },
        }


def decompose_Hm(K: IQField, m: int, p: int, conjugate: bool = False) -> SplitDecomposition:
    return SplitDecomposition(K, m, p, conjugate)


def keydiagram_check(K: IQField, m: int, ell: int, p: int) -> dict:
    """Pushforward along H[m*ell] -> H[m] commutes with xi_Delta on basis pairs."""
    if m % ell == 0:
        raise InputError("ell must not divide m")
    if K.splitting_type(ell) != "split":
        raise PreconditionFailed(f"{ell} is not split in {K}")
    big = SplitDecomposition(K, m * ell, p)
    small = SplitDecomposition(K, m, p)
    norm_a = group_ring_norm(big.ray_a, small.ray_a, p).hom
    norm_b = group_ring_norm(big.ray_b, small.ray_b, p).hom
    images = [small.ring.element(I) for I in big.ring.generator_ideals()]
    norm_ring = big.ring.presentation.hom_from_images(small.ring.group, images).p_part(p)
    checked = 0
    failures = []
    for g1 in big.Ha_p.elements():
        for g2 in big.Hb_p.elements():
            e1 = GroupRingElement.basis(big.Ha_p, g1)
            e2 = GroupRingElement.basis(big.Hb_p, g2)
            lhs = big.xi_delta(e1, e2).pushforward(norm_ring, small.Hring_p)
            rhs = small.xi_delta(e1.pushforward(norm_a, small.Ha_p), e2.pushforward(norm_b, small.Hb_p))
            checked += 1
            if lhs != rhs:
                failures.append((g1, g2))
    return {"m": m, "ell": ell, "p": p, "pairs_checked": checked, "passed": not failures,
            "failures": failures[:5], "orders": (big.product.order(), small.product.order())}

"""Hecke characters of imaginary quadratic fields.

A character of modulus f and infinity type (a, b) is stored as a finite-order
character eps of (O_K/f)^x, described by exponents of zeta_M on the cyclic
generators of :class:`~anticyc.classfield.ResidueUnitGroup`. On principal
ideals coprime to f,

    psi((alpha)) = eps(alpha) * alpha^(-a) * conj(alpha)^(-b),

so type (-1, 0) gives psi((n)) = n * chi_psi(n). For h_K > 1 the values on
one prime per class-group generator are supplied as a table.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Callable, Iterable, Sequence

import mpmath

from .arith import (
    PadicInt,
    VElem,
    ValueRing,
    crt_pair,
    kronecker_character,
    lcm,
    padic_log,
    teichmuller,
    value_ring,
)
from .classfield import ResidueUnitGroup, coprime_split
from .errors import (
    InputError,
    NotCoprime,
    NotPrincipalField,
    PreconditionFailed,
    UnitIncompatible,
)
from .iqfield import Elem, IQField, Ideal, quadratic_field


# ---------------------------------------------------------------------------
# Dirichlet characters

class DirichletCharacter:
    """A character of (Z/N)^x valued in mu_M inside a ValueRing.

    ``exponents[r]`` is k with chi(r) = zeta_M^k, for r coprime to N.
    """

    def __init__(self, modulus: int, ring: ValueRing, exponents: dict[int, int]):
        self.modulus = modulus
        self.ring = ring
        self.exponents = {r % modulus: k % ring.order for r, k in exponents.items()}
        units = [r for r in range(modulus) if math.gcd(r, modulus) == 1]
        if sorted(self.exponents) != sorted(r % modulus for r in units):
            raise InputError("Dirichlet character must be given on every unit residue")

    @classmethod
    def trivial(cls, modulus: int, ring: ValueRing) -> DirichletCharacter:
        return cls(modulus, ring, {r: 0 for r in range(max(modulus, 1)) if math.gcd(r, modulus) == 1})

    @classmethod
    def kronecker(cls, D: int, ring: ValueRing) -> DirichletCharacter:
        """n -> (D/n) modulo |D|; needs an even cyclotomic order."""
        if ring.order % 2:
            raise InputError("the value ring needs -1 to host a quadratic character")
        N = abs(D)
        half = ring.order // 2
        return cls(N, ring, {r: (0 if kronecker_character(D, r) == 1 else half)
                             for r in range(1, N) if math.gcd(r, N) == 1})

    def exponent(self, n: int) -> int | None:
        if math.gcd(n, self.modulus) != 1:
            return None
        return self.exponents[n % self.modulus]

    def __call__(self, n: int) -> VElem:
        k = self.exponent(n)
        return self.ring.zero if k is None else self.ring.zeta_power(k)

    def lift(self, order: int) -> DirichletCharacter:
        if order % self.ring.order:
            raise InputError("can only lift to a multiple of the cyclotomic order")
        ring = value_ring(self.ring.disc, order)
        step = order // self.ring.order
        return DirichletCharacter(self.modulus, ring, {r: k * step for r, k in self.exponents.items()})

    def __mul__(self, other: DirichletCharacter) -> DirichletCharacter:
        M = lcm(self.ring.order, other.ring.order)
        N = lcm(self.modulus, other.modulus)
        a, b = self.lift(M), other.lift(M)
        exps = {}
        for r in range(N):
            if math.gcd(r, N) == 1:
                exps[r] = a.exponent(r) + b.exponent(r)
        return DirichletCharacter(N, a.ring, exps)

    def is_trivial(self) -> bool:
        return all(k == 0 for k in self.exponents.values())

    def __eq__(self, other):
        if not isinstance(other, DirichletCharacter):
            return NotImplemented
        N = lcm(self.modulus, other.modulus)
        M = lcm(self.ring.order, other.ring.order)
        a, b = self.lift(M), other.lift(M)
        return all(a.exponent(r) == b.exponent(r) for r in range(N) if math.gcd(r, N) == 1)

    __hash__ = None

    def conductor(self) -> int:
        for d in sorted(d for d in range(1, self.modulus + 1) if self.modulus % d == 0):
            if all(k == 0 for r, k in self.exponents.items() if (r - 1) % d == 0):
                return d
        return self.modulus  # pragma: no cover

    def to_json(self) -> dict:
        return {"modulus": self.modulus, "order": self.ring.order,
                "exponents": [[r, k] for r, k in sorted(self.exponents.items())]}


# ---------------------------------------------------------------------------
# Hecke characters

CHARACTER_SCHEMA = "anticyc.character/1"


@dataclass(frozen=True)
class AvatarValue:
    """i_p of a character value; ``gamma_exponent`` is log_(1+p) when the value is in 1 + pZ_p."""

    value: PadicInt
    gamma_exponent: PadicInt | None


class HeckeCharacter:
    """A Hecke character of K with modulus ``conductor`` and infinity type (a, b)."""

    def __init__(self, K: IQField, conductor: Ideal, infinity_type: tuple[int, int], order: int,
                 exponents: Sequence[int], root_values: Sequence[VElem] | None = None,
                 listed_generators: Sequence[Elem] | None = None, listed_exponents: Sequence[int] | None = None):
        self.field = K
        self.conductor = conductor
        self.infinity_type = (int(infinity_type[0]), int(infinity_type[1]))
        self.ring = value_ring(K.disc, order)
        self.order = order
        self.units = ResidueUnitGroup(K, conductor)
        if len(exponents) != len(self.units.orders):
            raise InputError(f"expected {len(self.units.orders)} exponents, got {len(exponents)}")
        self.exponents = tuple(int(e) % order for e in exponents)
        for e, d in zip(self.exponents, self.units.orders):
            if (e * d) % order:
                raise InputError(f"exponent {e} is incompatible with a generator of order {d}")
        self._listed = (tuple(map(tuple, listed_generators)) if listed_generators is not None else None,
                        tuple(listed_exponents) if listed_exponents is not None else None)
        self._check_units()
        cl = K.class_group
        self.class_primes: list[Ideal] = []
        self.root_values: list[VElem] | None = None
        if cl.order > 1:
            self.class_primes = cl.generator_primes(avoid=conductor.norm)
            if root_values is None:
                raise NotPrincipalField(f"h_K = {cl.order} > 1 and no root-value table supplied")
            else:
                if len(root_values) != len(self.class_primes):
                    raise InputError("one root value per class-group generator is required")
                self.root_values = [self.ring(v) for v in root_values]
                for P, h, t in zip(self.class_primes, cl.group.invariants, self.root_values):
                    need = self._value_principal(K.principal_generator(P ** h))
                    if t ** h != need:
                        raise InputError(f"root value for {P} does not satisfy t^{h} = psi({P}^{h})")
        self._cache: dict[Ideal, VElem] = {}

    def __repr__(self):
        return f"HeckeCharacter(D={self.field.disc}, f={self.conductor}, type={self.infinity_type}, M={self.order}, e={list(self.exponents)})"

    # construction helpers ---------------------------------------------------
    @classmethod
    def from_function(cls, K: IQField, conductor: Ideal, infinity_type, order: int,
                      eps: Callable[[Elem], int], root_values=None) -> HeckeCharacter:
        """Character whose finite part is zeta^eps(beta) on residues beta."""
        units = ResidueUnitGroup(K, conductor)
        return cls(K, conductor, infinity_type, order, [eps(g) for g in units.generators], root_values)

    @classmethod
    def from_generator_values(cls, K: IQField, conductor: Ideal, infinity_type, order: int,
                              generators: Sequence[Elem], exponents: Sequence[int], root_values=None) -> HeckeCharacter:
        """Finite part given by eps(g_i) = zeta^exponents[i] on arbitrary generators of (O/f)^x."""
        units = ResidueUnitGroup(K, conductor)
        gens = [conductor.reduce(tuple(g)) for g in generators]
        coords = [units.dlog(g) for g in gens]
        if gens == [conductor.reduce(g) for g in units.generators]:
            exps = list(exponents)
        else:
            exps = _solve_generator_exponents(units, coords, list(exponents), order)
        return cls(K, conductor, infinity_type, order, exps, root_values,
                   listed_generators=[tuple(g) for g in generators], listed_exponents=list(exponents))

    # finite part ------------------------------------------------------------
    def eps_exponent(self, beta: Elem) -> int:
        v = self.units.dlog(beta)
        return sum(a * e for a, e in zip(v, self.exponents)) % self.order

    def eps(self, beta: Elem) -> VElem:
        return self.ring.zeta_power(self.eps_exponent(beta))

    def _algebraic(self, alpha: Elem, scale: int = 1) -> VElem:
        """(alpha/scale)^(-a) * conj(alpha/scale)^(-b)."""
        a, b = self.infinity_type
        R = self.ring
        K = self.field
        x = R(alpha)
        xb = R(K.conj(alpha))
        val = _signed_power(x, -a, K.norm(alpha), R(K.conj(alpha))) * _signed_power(xb, -b, K.norm(alpha), x)
        if scale != 1 and (a + b):
            val = val * Fraction(scale) ** (a + b)
        return val

    def _value_principal(self, alpha: Elem, scale: int = 1) -> VElem:
        mod = self.conductor
        if scale == 1:
            residue = alpha
        else:
            inv = pow(scale, -1, mod.a) if mod.a > 1 else 0
            residue = (alpha[0] * inv, alpha[1] * inv)
        return self.eps(residue) * self._algebraic(alpha, scale)

    def _check_units(self):
        bad = []
        for u in self.field.units:
            if self.eps(u) * self._algebraic(u) != self.ring.one:
                bad.append(u)
        if bad:
            raise UnitIncompatible(f"eps(u) u^-a ubar^-b != 1 for units {bad}", units=bad)

    # evaluation -----------------------------------------------------------
    def evaluate(self, ideal: Ideal) -> VElem:
        cached = self._cache.get(ideal)
        if cached is not None:
            return cached
        if not ideal.is_coprime(self.conductor):
            raise NotCoprime(f"{ideal} is not coprime to the conductor {self.conductor}")
        K = self.field
        if K.class_number == 1:
            value = self._value_principal(K.principal_generator(ideal))
        else:
            if self.root_values is None:
                raise NotPrincipalField(f"h_K = {K.class_number} > 1 and no root-value table supplied")
            x = K.class_group.class_of(ideal)
            twisted, scale = ideal, 1
            tail = self.ring.one
            for P, xj, t in zip(self.class_primes, x, self.root_values):
                if xj:
                    twisted = twisted * P.conj() ** xj
                    scale *= P.norm ** xj
                    tail = tail * t ** xj
            value = self._value_principal(K.principal_generator(twisted), scale) * tail
        self._cache[ideal] = value
        return value

    __call__ = evaluate

    def evaluate_complex(self, ideal: Ideal, dps: int = 40):
        return self.ring.complex_embedding(self.evaluate(ideal), dps)

    @property
    def weight(self) -> int:
        """k for infinity type (1 - k, 0)."""
        a, b = self.infinity_type
        if b != 0 or a > 0:
            raise InputError(f"infinity type {self.infinity_type} is not of the form (1-k, 0)")
        return 1 - a

    def central_character(self) -> DirichletCharacter:
        """chi_psi with psi((n)) = n^(-a-b) chi_psi(n)."""
        N = self.conductor.norm
        return DirichletCharacter(N, self.ring, {r: self.eps_exponent((r, 0)) for r in range(max(N, 1)) if math.gcd(r, N) == 1})

    # new characters from old ----------------------------------------------
    def lift(self, order: int) -> HeckeCharacter:
        if order % self.order:
            raise InputError("can only lift to a multiple of the cyclotomic order")
        step = order // self.order
        roots = [self.ring_lift(v, order) for v in self.root_values] if self.root_values else None
        return HeckeCharacter(self.field, self.conductor, self.infinity_type, order,
                              [e * step for e in self.exponents], roots)

    def ring_lift(self, v: VElem, order: int) -> VElem:
        return value_ring(self.field.disc, order)(v)

    def conjugate(self) -> HeckeCharacter:
        K = self.field
        fbar = self.conductor.conj()
        a, b = self.infinity_type
        roots = None
        if K.class_number > 1 and self.root_values is not None:
            primes = K.class_group.generator_primes(avoid=fbar.norm)
            roots = [self.evaluate(P.conj()) for P in primes]
        return HeckeCharacter.from_function(K, fbar, (b, a), self.order,
                                            lambda g: self.eps_exponent(K.conj(g)), roots)

    def __mul__(self, other: HeckeCharacter) -> HeckeCharacter:
        if other.field != self.field:
            raise InputError("characters of different fields")
        K = self.field
        f = ideal_lcm(self.conductor, other.conductor)
        M = lcm(self.order, other.order)
        s1, s2 = M // self.order, M // other.order
        t = (self.infinity_type[0] + other.infinity_type[0], self.infinity_type[1] + other.infinity_type[1])
        roots = None
        if K.class_number > 1:
            if self.root_values is None or other.root_values is None:
                raise NotPrincipalField("product needs root tables on both factors")
            R = value_ring(K.disc, M)
            roots = [R(self.evaluate(P)) * R(other.evaluate(P)) for P in K.class_group.generator_primes(avoid=f.norm)]
        return HeckeCharacter.from_function(
            K, f, t, M, lambda g: s1 * self.eps_exponent(g) + s2 * other.eps_exponent(g), roots)

    def __pow__(self, n: int) -> HeckeCharacter:
        if n < 0:
            return self.inverse() ** (-n)
        result = trivial_character(self.field, self.order)
        for _ in range(n):
            result = result * self
        if n and result.conductor != self.conductor:
            result = result.with_modulus(self.conductor)
        return result

    def inverse(self) -> HeckeCharacter:
        K = self.field
        a, b = self.infinity_type
        roots = None
        if K.class_number > 1 and self.root_values is not None:
            roots = [t.inverse() for t in self.root_values]
        return HeckeCharacter(K, self.conductor, (-a, -b), self.order, [-e for e in self.exponents], roots)

    def with_modulus(self, modulus: Ideal) -> HeckeCharacter:
        """The same character viewed with a multiple of its modulus."""
        if not self.conductor.contains_ideal(modulus):
            raise InputError("new modulus must be divisible by the old one")
        return HeckeCharacter.from_function(self.field, modulus, self.infinity_type, self.order, self.eps_exponent,
                                            self.root_values)

    # p-adic side ------------------------------------------------------------
    def padic_avatar(self, ideal: Ideal, p: int, N: int) -> AvatarValue:
        K = self.field
        if ideal.norm % p == 0:
            # i_p sees P through alpha and pbar through conj(alpha)
            a, b = self.infinity_type
            primes = K.prime_ideals_above(p)
            seen = ([primes[0]] if a else []) + ([primes[-1]] if b else [])
            if len(primes) < 2 or any(ideal.is_divisible_by(P) for P in seen):
                raise NotCoprime(f"{ideal} is not coprime to the primes above p={p} seen by i_p")
        emb = self.ring.padic_embedding(p, N)
        value = emb(self.evaluate(ideal))
        gamma = None
        if value.value % p == 1:
            log_v = padic_log(value)
            log_g = padic_log(PadicInt(1 + p, p, N))
            gamma = PadicInt(log_v.value // p, p, N - 1) * PadicInt(log_g.value // p, p, N - 1).inverse() if N > 1 else None
        return AvatarValue(value, gamma)

    def condition_spade(self, p: int) -> tuple[bool, str]:
        """Condition spade for type (-1, 0), read at the designated prime above p."""
        if self.infinity_type != (-1, 0):
            raise InputError("Condition spade is stated for infinity type (-1, 0)")
        K = self.field
        f = self.conductor
        if f.norm % p:
            return True, "(p, f) = 1"
        primes = K.prime_ideals_above(p)
        if len(primes) != 2:
            return False, f"p={p} does not split, so p | f leaves no admissible branch"
        P, Pbar = primes
        if f.is_divisible_by(Pbar):
            return False, "pbar divides f"
        e = 0
        rest = f
        while rest.is_divisible_by(P):
            rest = rest.divide(P)
            e += 1
        Pe = P ** e
        r = _primitive_root(p)
        loc = teichmuller(r, p, e).value if e > 1 else r
        if rest.norm == 1:
            u = (loc, 0)
        else:
            x, y = coprime_split(rest, Pe)  # x in rest, y in Pe, x + y = 1
            u = f.reduce(K.mul((loc, 0), x))
            u = f.reduce((u[0] + y[0], u[1] + y[1]))
        image = self._residue_of_root(self.eps_exponent(u), p)
        if image == pow(r, -2, p):
            return False, "restriction to the units at p is congruent to omega"
        return True, "p | f, pbar does not divide f, and the unit restriction differs from omega"

    def _residue_of_root(self, k: int, p: int) -> int:
        """zeta_M^k reduced modulo the prime above p fixed by i_p.

        Only the prime-to-p part survives reduction, and it lies in mu_d with
        d = gcd(M, p - 1), where i_p is available exactly.
        """
        M = self.order
        o = M // math.gcd(k, M)
        o_p = 1
        while o % (o_p * p) == 0:
            o_p *= p
        o_prime = o // o_p
        u = crt_pair(1, o_prime, 0, o_p) if o_p > 1 else 1
        k = (k * u) % M
        d = math.gcd(M, p - 1)
        if k % (M // d):
            raise PreconditionFailed(f"zeta_{M}^{k} has residue order not dividing p-1")
        z = value_ring(self.field.disc, d).padic_embedding(p, 1).zeta if d > 1 else 1
        return pow(z, k // (M // d), p)

    # serialization -----------------------------------------------------------
    def to_json(self) -> dict:
        gens, exps = self._listed
        if gens is None:
            gens = tuple(self.units.generators)
            exps = self.exponents
        out = {
            "schema": CHARACTER_SCHEMA,
            "field": self.field.disc,
            "conductor": self.conductor.to_json(),
            "infinity_type": list(self.infinity_type),
            "order": self.order,
            "generators": [list(g) for g in gens],
            "generator_orders": [self.units.element_order(self.units.dlog(g)) for g in gens],
            "exponents": list(exps),
        }
        if self.root_values is not None:
            out["root_values"] = [
                {"prime": P.to_json(), "value": [str(c) for c in t.c]}
                for P, t in zip(self.class_primes, self.root_values)
            ]
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_json(cls, data: dict | str) -> HeckeCharacter:
        if isinstance(data, str):
            data = json.loads(data)
        if data.get("schema", CHARACTER_SCHEMA) != CHARACTER_SCHEMA:
            raise InputError(f"unsupported character schema {data['schema']!r}, expected {CHARACTER_SCHEMA!r}")
        try:
            K = quadratic_field(int(data["field"]))
            f = K.ideal_hnf(*data["conductor"])
            order = int(data["order"])
            gens = [tuple(g) for g in data["generators"]]
            exps = [int(e) for e in data["exponents"]]
            itype = tuple(data["infinity_type"])
        except (KeyError, TypeError) as exc:
            raise InputError(f"malformed character data: {exc}") from exc
        roots = None
        if "root_values" in data:
            R = value_ring(K.disc, order)
            expected = K.class_group.generator_primes(avoid=f.norm)
            listed = [K.ideal_hnf(*rv["prime"]) for rv in data["root_values"]]
            if listed != expected:
                raise InputError("root values must be listed on the canonical class-group primes")
            roots = [R.from_coords([Fraction(c) for c in rv["value"]]) for rv in data["root_values"]]
        return cls.from_generator_values(K, f, itype, order, gens, exps, roots)


def _signed_power(x: VElem, n: int, norm: int, conj: VElem) -> VElem:
    if n >= 0:
        return x ** n
    return (conj ** (-n)) * Fraction(1, norm ** (-n))


def _primitive_root(p: int) -> int:
    from .arith import factor
    qs = list(factor(p - 1)) if p > 2 else []
    for r in range(1, p):
        if all(pow(r, (p - 1) // q, p) != 1 for q in qs):
            return r
    raise InputError(f"{p} has no primitive root")  # pragma: no cover


def _solve_generator_exponents(units: ResidueUnitGroup, coords: list, exps: list[int], order: int) -> list[int]:
    """Exponents on the canonical generators from values on listed generators."""
    orders = units.orders
    span = {tuple(0 for _ in orders): 0}
    for c, e in zip(coords, exps):
        changed = True
        while changed:
            changed = False
            for s, val in list(span.items()):
                key = tuple((a + b) % d for a, b, d in zip(s, c, orders))
                v = (val + e) % order
                if key not in span:
                    span[key] = v
                    changed = True
                elif span[key] != v:
                    raise InputError("listed generator values are inconsistent")
    if len(span) != units.order:
        raise InputError("listed elements do not generate (O/f)^x")
    return [span[tuple(int(i == j) for j in range(len(orders)))] for i in range(len(orders))]


def ideal_lcm(I: Ideal, J: Ideal) -> Ideal:
    K = I.field
    exps: dict[Ideal, int] = {}
    for P, e in I.factor() + J.factor():
        exps[P] = max(exps.get(P, 0), e)
    out = K.unit_ideal
    for P, e in exps.items():
        out = out * P ** e
    return out


def trivial_character(K: IQField, order: int = 2) -> HeckeCharacter:
    roots = None
    if K.class_number > 1:
        roots = [value_ring(K.disc, order).one for _ in K.class_group.group.invariants]
    return HeckeCharacter(K, K.unit_ideal, (0, 0), order, [], roots)


def build_character(K: IQField, conductor: Ideal, infinity_type, order: int, exponents, root_values=None) -> HeckeCharacter:
    return HeckeCharacter(K, conductor, infinity_type, order, exponents, root_values)


def psi0(K: IQField, p: int, exponent: int | None = None) -> HeckeCharacter:
    """The character of type (-1, 0) and conductor the designated prime above p
    whose p-adic avatar takes values in 1 + pZ_p.

    ``exponent`` overrides the finite part (used to test uniqueness).
    """
    if K.splitting_type(p) != "split":
        raise PreconditionFailed(f"p={p} does not split in {K}")
    if K.class_number % p == 0:
        raise PreconditionFailed(f"p={p} divides h_K")
    if K.class_number > 1:
        raise NotPrincipalField("psi0 is built exactly only for class number one")
    P = K.prime_ideals_above(p)[0]
    M = p - 1
    R = value_ring(K.disc, M)
    emb = R.padic_embedding(p, 1)
    units = ResidueUnitGroup(K, P)
    g = units.generators[0]
    g_int = (g[0] - g[1] * P.b) % p  # omega = -b mod P
    if exponent is None:
        z = emb.zeta % p
        target = pow(g_int, -1, p)
        exponent = next(e for e in range(M) if pow(z, e, p) == target)
    return HeckeCharacter(K, P, (-1, 0), M, [exponent])


def psi0_candidates(K: IQField, p: int, test_bound: int = 200) -> list[int]:
    """All exponents e giving a unit-compatible character of type (-1,0), conductor P,
    whose avatar lies in 1 + pZ_p on every principal prime of norm <= test_bound."""
    out = []
    for e in range(p - 1):
        try:
            psi = psi0(K, p, exponent=e)
        except UnitIncompatible:
            continue
        ok = True
        for n, ideals in K.enumerate_ideals(test_bound, psi.conductor).items():
            if n % p == 0:
                continue
            for I in ideals:
                if len(I.factor()) == 1 and I.factor()[0][1] == 1:
                    if psi.padic_avatar(I, p, 2).value.value % p != 1:
                        ok = False
                        break
            if not ok:
                break
        if ok:
            out.append(e)
    return out

"""Theta series of Hecke characters and checks on their q-expansions.

Coefficients are always produced by summing a character over enumerated
ideals; the Hecke relations are only ever used to *check* the result.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

from .arith import PadicInt, VElem, ValueRing, factor, is_prime, lcm, padic_exp, padic_log, value_ring
from .classfield import GroupRingElement, ray_class_group, p_part
from .errors import InputError, NotCoprime, NotOrdinary, PreconditionFailed, ResourceLimit
from .heckechar import DirichletCharacter, HeckeCharacter, psi0
from .iqfield import IQField, Ideal


@dataclass
class QExpansion:
    """c_1..c_B of a modular form, stored with index 0 unused."""

    ring: ValueRing
    coefficients: list
    weight: int
    level: int
    nebentypus: DirichletCharacter
    meta: dict = field(default_factory=dict)

    @property
    def bound(self) -> int:
        return len(self.coefficients) - 1

    def __getitem__(self, n: int):
        return self.coefficients[n]

    def with_coefficient(self, n: int, value) -> QExpansion:
        coeffs = list(self.coefficients)
        coeffs[n] = value
        return QExpansion(self.ring, coeffs, self.weight, self.level, self.nebentypus, dict(self.meta))

    def to_json(self) -> dict:
        return {
            "schema": "anticyc.qexp/1",
            "field": self.meta.get("field"),
            "character": self.meta.get("character"),
            "weight": self.weight,
            "level": self.level,
            "flags": self.meta.get("flags", []),
            "nebentypus": self.nebentypus.to_json(),
            "B": self.bound,
            "basis": "omega^a zeta^b at index 2b+a",
            "coefficients": [[str(x) for x in c.c] for c in self.coefficients[1:]],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def modular_params(psi: HeckeCharacter) -> tuple[int, int, DirichletCharacter]:
    """(weight, level, nebentypus chi_psi * eps_K) for infinity type (1-k, 0)."""
    k = psi.weight
    if k < 1:
        raise InputError(f"infinity type {psi.infinity_type} gives no holomorphic theta series")
    K = psi.field
    level = abs(psi.conductor.norm * K.disc)
    chi = psi.central_character()
    order = chi.ring.order if chi.ring.order % 2 == 0 else 2 * chi.ring.order
    chi = chi.lift(order)
    return k, level, chi * DirichletCharacter.kronecker(K.disc, chi.ring)


def theta_qexp(psi: HeckeCharacter, B: int) -> QExpansion:
    """q-expansion sum over ideals a coprime to f of psi(a) q^N(a), up to q^B."""
    if B < 1:
        raise InputError("bound must be at least 1")
    k, level, chi = modular_params(psi)
    ring = value_ring(psi.field.disc, lcm(psi.order, chi.ring.order))
    coeffs = [ring.zero] * (B + 1)
    for n, ideals in psi.field.enumerate_ideals(B, coprime_to=psi.conductor).items():
        total = ring.zero
        for I in ideals:
            total = total + psi.evaluate(I)
        coeffs[n] = ring(total)
    meta = {"field": psi.field.disc, "character": psi.to_json()}
    if k == 1:
        # reached only as a family endpoint; the recursion uses l^0 = 1
        meta["flags"] = ["weight-one"]
    return QExpansion(ring, coeffs, k, level, chi.lift(ring.order), meta)


@dataclass
class RecursionReport:
    passed: bool
    relations_checked: int
    violation: dict | None = None

    def to_json(self) -> dict:
        return {"passed": self.passed, "relations_checked": self.relations_checked, "violation": self.violation}


def hecke_recursion_check(q: QExpansion) -> RecursionReport:
    """Check c_1 = 1, c_mn = c_m c_n for coprime m, n, and the prime-power
    recursion at primes not dividing the level; report the first failure."""
    B = q.bound
    c = [None] + [q.ring(x) for x in q.coefficients[1:]]
    zero = [True] + [x.is_zero() for x in c[1:]]
    checked = 0
    if B >= 1:
        checked += 1
        if c[1] != q.ring.one:
            return RecursionReport(False, checked, {"kind": "normalization", "n": 1})
    for m, r in _coprime_pairs(B):
        n = m * r
        checked += 1
        if zero[m] or zero[r]:
            if not zero[n]:
                return RecursionReport(False, checked, {"kind": "multiplicative", "m": m, "n": r})
        elif c[n] != c[m] * c[r]:
            return RecursionReport(False, checked, {"kind": "multiplicative", "m": m, "n": r})
    for ell in range(2, B + 1):
        if not is_prime(ell) or q.level % ell == 0:
            continue
        twist = q.nebentypus(ell) * (ell ** (q.weight - 1))
        prev, cur, power = q.ring.one, c[ell], ell
        r = 1
        while power * ell <= B:
            checked += 1
            nxt = c[power * ell]
            if nxt != c[ell] * cur - twist * prev:
                return RecursionReport(False, checked, {"kind": "prime_power", "ell": ell, "r": r})
            prev, cur, power, r = cur, nxt, power * ell, r + 1
    return RecursionReport(True, checked)


@lru_cache(maxsize=16)
def _coprime_pairs(B: int) -> tuple[tuple[int, int], ...]:
    """(m, r) with 2 <= m < r, gcd(m, r) = 1, mr <= B, ordered by mr then m."""
    out = []
    for n in range(2, B + 1):
        for m in range(2, math.isqrt(n) + 1):
            r, rem = divmod(n, m)
            if not rem and m < r and math.gcd(m, r) == 1:
                out.append((m, r))
    return tuple(out)


def unconstrained_indices(B: int, level: int) -> list[int]:
    """Indices n <= B whose coefficient enters none of the checked relations."""
    out = []
    for n in range(2, B + 1):
        if is_prime(n) and 2 * n > B and (n * n > B or level % n == 0):
            out.append(n)
    return out


def insensitive_indices(q: QExpansion) -> list[int]:
    """Indices n whose coefficient can be raised by one without changing any
    relation that ``hecke_recursion_check`` evaluates.

    This is a dependency analysis using the actual values: c_n is visible
    when it is the left side of a relation, when it multiplies a non-zero
    partner c_r with gcd(n, r) = 1 and nr <= B, or when it sits in a
    prime-power recursion at a good prime with a non-zero multiplier.
    """
    B = q.bound
    c = [None] + [q.ring(x) for x in q.coefficients[1:]]
    nonzero = [False] + [not x.is_zero() for x in c[1:]]
    out = []
    for n in range(2, B + 1):
        primes = [ell for ell in range(2, n + 1) if n % ell == 0 and is_prime(ell)]
        if len(primes) > 1:
            continue  # left side of a multiplicative relation
        ell = primes[0]
        j, rest = 0, n
        while rest > 1:
            rest //= ell
            j += 1
        good = q.level % ell != 0
        if good and j >= 2:
            continue  # left side of a prime-power relation
        if any(nonzero[r] and math.gcd(n, r) == 1 for r in range(2, B // n + 1)):
            continue
        if good:
            if j == 1 and ell * ell <= B:
                bumped = c[ell] + q.ring.one
                if bumped * bumped != c[ell] * c[ell]:
                    continue
            if n * ell <= B and nonzero[ell]:
                continue
            if n * ell * ell <= B:
                continue  # enters as the lagging term, multiplied by a unit times ell^(k-1)
        out.append(n)
    return out


# ---------------------------------------------------------------------------
# the Hecke-algebra map into group rings

def phi_n_image(psi: HeckeCharacter, modulus: Ideal, ell: int, p: int) -> GroupRingElement:
    """Sum over primes l | ell of norm ell, l prime to modulus, of [l] psi(l) in the p-part of H_modulus."""
    if not is_prime(ell):
        raise InputError(f"{ell} is not prime")
    K = psi.field
    group, proj, ray = _ray_p_part(K, modulus, p)
    out = GroupRingElement(group)
    for P in K.prime_ideals_above(ell):
        if P.norm != ell or not P.is_coprime(modulus):
            continue
        if not P.is_coprime(psi.conductor):
            continue
        out = out + GroupRingElement(group, {proj(ray.element(P)): psi.evaluate(P)})
    return out


def phi_n_diamond(psi: HeckeCharacter, modulus: Ideal, d: int, p: int) -> GroupRingElement:
    """Image of the diamond operator <d>: chi_psi(d) eps_K(d) [(d)]."""
    K = psi.field
    if math.gcd(d, modulus.norm * psi.conductor.norm * abs(K.disc)) != 1:
        raise NotCoprime(f"d={d} is not coprime to the level data")
    group, proj, ray = _ray_p_part(K, modulus, p)
    _, _, chi = modular_params(psi)
    return GroupRingElement(group, {proj(ray.element(K.ideal(d))): chi(d)})


def _ray_p_part(K: IQField, modulus: Ideal, p: int):
    ray = ray_class_group(K, modulus)
    group, proj = p_part(ray.group, p)
    return group, proj, ray


# ---------------------------------------------------------------------------
# p-adic side

@dataclass
class Stabilization:
    alpha: PadicInt
    beta: PadicInt
    coefficients: list  # index 0 unused
    p: int

    def un_stabilize(self) -> list:
        out = [None]
        for n in range(1, len(self.coefficients)):
            a = self.coefficients[n]
            if n % self.p == 0:
                a = a + self.beta * out[n // self.p]
            out.append(a)
        return out

    def up_eigen_check(self) -> bool:
        B = len(self.coefficients) - 1
        return all(self.coefficients[self.p * n] == self.alpha * self.coefficients[n] for n in range(1, B // self.p + 1))


def p_stabilize(q: QExpansion, p: int, N: int) -> Stabilization:
    """Ordinary p-stabilization a_n - beta a_(n/p) with alpha the unit root of X^2 - c_p X + chi(p) p^(k-1).

    When p already divides the level the Hecke polynomial at p is 1 - c_p X,
    so the form is its own stabilization (beta = 0) provided c_p is a unit.
    """
    if q.bound < p:
        raise InputError("the expansion must reach q^p")
    emb = q.ring.padic_embedding(p, N)
    coeffs = [None] + [emb(x) for x in q.coefficients[1:]]
    cp = coeffs[p]
    if cp.valuation() > 0:
        raise NotOrdinary(f"c_{p} is not a {p}-adic unit")
    if q.level % p == 0:
        zero = PadicInt(0, p, N)
        return Stabilization(cp, zero, coeffs, p)
    const = emb(q.nebentypus(p)) * (p ** (q.weight - 1))
    alpha = _unit_root(cp, const, p, N)
    beta = cp - alpha
    stab = [None]
    for n in range(1, q.bound + 1):
        a = coeffs[n]
        if n % p == 0:
            a = a - beta * coeffs[n // p]
        stab.append(a)
    return Stabilization(alpha, beta, stab, p)


def _unit_root(c: PadicInt, const: PadicInt, p: int, N: int) -> PadicInt:
    """The unit root of X^2 - c X + const, const divisible by p."""
    x = PadicInt(c.value, p, N)
    for _ in range(N.bit_length() + 2):
        f = x * x - c * x + const
        df = x * 2 - c
        x = x - f * df.inverse()
    if (x * x - c * x + const).value % p ** N:
        raise NotOrdinary("Newton iteration for the unit root did not converge")
    return x


def cm_family_coefficient(xi: HeckeCharacter, p: int, k: int, n: int, N: int, b: int = 0) -> PadicInt:
    """Coefficient of q^n in the CM family of xi specialised at S = v(1+p)^(k-1) - 1.

    Each ideal a prime to p c contributes xi(a) (v^-1 (1+S))^(-l(a)), where
    (1+p)^(-l(a)) is the psi0-avatar of a; with b = 0 the base is (1+p)^(k-1).
    """
    if b != 0:
        raise InputError("only b = 0 (Gamma_p generated by the image of 1+p) is supported")
    if xi.infinity_type != (0, 0):
        raise InputError("xi must be of finite order")
    K = xi.field
    if xi.conductor.norm % p == 0:
        raise PreconditionFailed("the conductor of xi must be prime to p")
    if N < 2:
        raise ResourceLimit("precision must be at least 2 for the logarithm")
    base = psi0(K, p)
    P = base.conductor
    modulus = xi.conductor * P
    emb = xi.ring.padic_embedding(p, N)
    log_gamma = padic_log(PadicInt(1 + p, p, N + 1))
    target_log = log_gamma * (k - 1)  # log of v^-1 (1+S) = (1+p)^(k-1)
    total = PadicInt(0, p, N)
    for I in K.ideals_of_norm(n):
        if not I.is_coprime(modulus):
            continue
        avatar = base.padic_avatar(I, p, N + 1).value
        ell = -_gamma_log(avatar, log_gamma, p, N)  # l(sigma_a)
        term = padic_exp(PadicInt((-ell * target_log).value, p, N))
        total = total + emb(xi.evaluate(I)) * term
    return total


def _gamma_log(u: PadicInt, log_gamma: PadicInt, p: int, N: int) -> int:
    """x in Z/p^N with u = (1+p)^x."""
    lu = padic_log(u)
    return (lu.value // p) * pow(log_gamma.value // p, -1, p ** N) % p ** N


@dataclass
class FamilyComparison:
    passed: bool
    k: int
    bound: int
    precision: int
    min_agreement: int
    first_mismatch: int | None = None
    avatar_generator: int | None = None

    def to_json(self) -> dict:
        return {"passed": self.passed, "k": self.k, "B": self.bound, "N": self.precision,
                "min_agreement": self.min_agreement, "first_mismatch": self.first_mismatch,
                "avatar_generator_norm": self.avatar_generator}


def avatar_generator_norm(K, p: int, bound: int) -> int | None:
    """Smallest norm of an ideal whose psi0-avatar generates 1 + pZ_p, the b = 0 hypothesis."""
    base = psi0(K, p)
    for n in range(2, bound + 1):
        for I in K.ideals_of_norm(n):
            if I.is_coprime(base.conductor) and n % p:
                gamma = base.padic_avatar(I, p, 3).gamma_exponent
                if gamma is not None and gamma.value % p:
                    return n
    return None


def specialization_compare(xi: HeckeCharacter, p: int, k: int, B: int, N: int) -> FamilyComparison:
    """Compare the weight-k specialisation of the CM family with the ordinary
    stabilisation of theta(xi psi0^(k-1)), coefficient by coefficient mod p^N."""
    K = xi.field
    psi = (xi * psi0(K, p) ** (k - 1)) if k > 1 else xi.with_modulus(xi.conductor * psi0(K, p).conductor)
    q = theta_qexp(psi, B)
    stab = p_stabilize(q, p, N)
    agreement = N
    mismatch = None
    for n in range(1, B + 1):
        fam = cm_family_coefficient(xi, p, k, n, N)
        ref = stab.coefficients[n]
        diff = (fam.value - ref.value) % p ** N
        digits = N if diff == 0 else _val(diff, p)
        agreement = min(agreement, digits)
        if digits < N and mismatch is None:
            mismatch = n
    generator = avatar_generator_norm(K, p, B)
    return FamilyComparison(mismatch is None and generator is not None, k, B, N, agreement, mismatch, generator)


def _val(x: int, p: int) -> int:
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v

"""Imaginary quadratic fields, their ideals and ideal class groups.

Elements of O_K are integer pairs ``(x, y)`` standing for ``x + y*omega``
where omega = sqrt(D)/2 or (1 + sqrt(D))/2. Ideals are kept in Hermite normal
form ``[a, b + c*omega]`` (a Z-basis), which makes equality and hashing trivial.
"""

from __future__ import annotations

import math
from functools import cached_property, lru_cache
from itertools import product
from typing import Iterable, Iterator

from .arith import (
    FiniteAbelianGroup,
    GroupStructure,
    _egcd,
    abelian_structure,
    factor,
    is_prime,
    kronecker_symbol,
    omega_data,
    qconj,
    qmul,
    qnorm,
)
from .errors import InputError, NotPrincipal

Elem = tuple[int, int]


def is_fundamental_discriminant(D: int) -> bool:
    if D >= 0:
        return False
    if D % 4 == 1:
        return _squarefree(-D)
    if D % 4 == 0:
        m = D // 4
        return m % 4 in (2, 3) and _squarefree(-m)
    return False


def _squarefree(n: int) -> bool:
    return n >= 1 and all(e == 1 for e in factor(n).values()) if n > 1 else n == 1


@lru_cache(maxsize=None)
def quadratic_field(disc: int) -> IQField:
    """Shared field instance for a fundamental discriminant."""
    return IQField(disc)


class IQField:
    def __init__(self, disc: int):
        if not is_fundamental_discriminant(disc):
            raise InputError(f"{disc} is not a negative fundamental discriminant")
        self.disc = disc
        self.t, self.n = omega_data(disc)
        self.w = {-3: 6, -4: 4}.get(disc, 2)

    def __repr__(self):
        return f"IQField({self.disc})"

    def __eq__(self, other):
        return isinstance(other, IQField) and other.disc == self.disc

    def __hash__(self):
        return hash(("IQField", self.disc))

    # element arithmetic ---------------------------------------------------
    def mul(self, x: Elem, y: Elem) -> Elem:
        return qmul(x, y, self.t, self.n)

    def conj(self, x: Elem) -> Elem:
        return qconj(x, self.t)

    def norm(self, x: Elem) -> int:
        return qnorm(x, self.t, self.n)

    def pow(self, x: Elem, e: int) -> Elem:
        result = (1, 0)
        for _ in range(e):
            result = self.mul(result, x)
        return result

    @cached_property
    def unit_generator(self) -> Elem:
        if self.disc == -4:
            return (0, 1)
        if self.disc == -3:
            return (0, 1)  # (1 + sqrt(-3))/2 has order 6
        return (-1, 0)

    @cached_property
    def units(self) -> list[Elem]:
        out = [(1, 0)]
        for _ in range(self.w - 1):
            out.append(self.mul(out[-1], self.unit_generator))
        return out

    def normalize_generator(self, x: Elem) -> Elem:
        """Lexicographically largest associate of x."""
        return max(self.mul(u, x) for u in self.units)

    # ideals -----------------------------------------------------------------
    def ideal(self, *gens: Elem | int) -> Ideal:
        """The ideal generated by the given elements."""
        vecs = []
        for g in gens:
            g = (g, 0) if isinstance(g, int) else tuple(g)
            vecs.append(g)
            vecs.append(self.mul(g, (0, 1)))
        return self._ideal_from_lattice(vecs)

    def ideal_hnf(self, a: int, b: int, c: int) -> Ideal:
        ideal = Ideal(self, a, b, c)
        if not ideal._closed_under_omega():
            raise InputError(f"[{a}, {b} + {c}w] is not an ideal of {self}")
        return ideal

    def _ideal_from_lattice(self, vecs: Iterable[Elem]) -> Ideal:
        a, b, c = _hnf2(vecs)
        if a == 0:
            raise InputError("zero ideal")
        return Ideal(self, a, b, c)

    @cached_property
    def unit_ideal(self) -> Ideal:
        return Ideal(self, 1, 0, 1)

    def prime_ideals_above(self, ell: int) -> list[Ideal]:
        """Primes above ell, split ones ordered by the constant b in [ell, b + omega]."""
        return list(_primes_above(self.disc, ell))

    def splitting_type(self, ell: int) -> str:
        k = kronecker_symbol(self.disc, ell)
        return {1: "split", -1: "inert", 0: "ramified"}[k]

    def ideals_of_norm(self, n: int, excluded: frozenset = frozenset()) -> list[Ideal]:
        """Integral ideals of norm n not divisible by any prime in ``excluded``."""
        if n == 1:
            return [self.unit_ideal]
        choices = []
        for ell, e in factor(n).items():
            options = [I for I in self._prime_power_ideals(ell, e) if not any(I.is_divisible_by(P) for P in excluded if P.a % ell == 0)]
            if not options:
                return []
            choices.append(options)
        out = []
        for combo in product(*choices):
            ideal = combo[0]
            for other in combo[1:]:
                ideal = ideal * other
            out.append(ideal)
        return out

    @lru_cache(maxsize=4096)
    def _prime_power_ideals(self, ell: int, e: int) -> list[Ideal]:
        kind = self.splitting_type(ell)
        primes = self.prime_ideals_above(ell)
        if kind == "inert":
            return [primes[0] ** (e // 2)] if e % 2 == 0 else []
        if kind == "ramified":
            return [primes[0] ** e]
        P, Q = primes
        return [P ** i * Q ** (e - i) for i in range(e, -1, -1)]

    def enumerate_ideals(self, bound: int, coprime_to: Ideal | None = None) -> dict[int, list[Ideal]]:
        """Map n -> integral ideals of norm n coprime to ``coprime_to``, for 1 <= n <= bound.

        Ideals are assembled from prime factorizations of each n, so no
        multiplicativity of any character or coefficient is assumed.
        """
        excluded = frozenset(P for P, _ in coprime_to.factor()) if coprime_to is not None else frozenset()
        return {n: self.ideals_of_norm(n, excluded) for n in range(1, bound + 1)}

    def iter_ideals(self, bound: int, coprime_to: Ideal | None = None) -> Iterator[Ideal]:
        """Ideals of norm <= bound coprime to ``coprime_to``, by increasing norm."""
        for ideals in self.enumerate_ideals(bound, coprime_to).values():
            yield from ideals

    # residues -------------------------------------------------------------
    def residue_ring_elements(self, ideal: Ideal) -> list[Elem]:
        return [(x, y) for y in range(ideal.c) for x in range(ideal.a)]

    # class group -----------------------------------------------------------
    @cached_property
    def class_group(self) -> ClassGroup:
        return ClassGroup(self)

    @property
    def class_number(self) -> int:
        return self.class_group.order

    def principal_generator(self, ideal: Ideal) -> Elem:
        """A generator of a principal ideal, normalized among its associates."""
        if ideal.field != self:
            raise InputError("ideal belongs to another field")
        A, Bp = ideal.a // ideal.c, ideal.b // ideal.c
        form = (A, 2 * Bp + self.t, (Bp * Bp + self.t * Bp + self.n) // A)
        basis = ((A, 0), (Bp, 1))
        (a, _, _), (alpha1, _) = reduce_form_with_basis(form, basis)
        if a != 1:
            raise NotPrincipal(f"{ideal} is not principal")
        gen = (alpha1[0] * ideal.c, alpha1[1] * ideal.c)
        return self.normalize_generator(gen)

    def is_principal(self, ideal: Ideal) -> bool:
        return self.class_group.class_of(ideal) == self.class_group.group.identity()

    # reduction modulo an ideal ---------------------------------------------
    def reduce_mod(self, x: Elem, ideal: Ideal) -> Elem:
        return ideal.reduce(x)

    def inverse_mod(self, x: Elem, ideal: Ideal) -> Elem:
        """Inverse of x in (O/ideal)^x."""
        nrm = self.norm(x)
        N = ideal.norm
        if math.gcd(nrm, N) != 1:
            # fall back to search when the norm shares factors but x is a unit mod ideal
            for r in self.residue_ring_elements(ideal):
                if ideal.reduce(self.mul(r, x)) == ideal.reduce((1, 0)):
                    return r
            raise InputError(f"{x} is not invertible modulo {ideal}")
        inv = pow(nrm, -1, N)
        xb = self.conj(x)
        return ideal.reduce((xb[0] * inv, xb[1] * inv))


def _hnf2(vecs: Iterable[Elem]) -> tuple[int, int, int]:
    """HNF (a, b, c) of the Z-lattice spanned by integer pairs."""
    piv = None  # current vector with y = c
    a = 0
    for x, y in vecs:
        if y == 0:
            a = math.gcd(a, x)
            continue
        if piv is None:
            piv = (x, y)
            continue
        bx, c = piv
        g, u, w = _egcd(c, y)
        new = (u * bx + w * x, g)
        elim = (y // g) * bx - (c // g) * x
        a = math.gcd(a, elim)
        piv = new
    if piv is None:
        return abs(a), 0, 0
    bx, c = piv
    if c < 0:
        bx, c = -bx, -c
    a = abs(a)
    return a, (bx % a) if a else bx, c


class Ideal:
    """Integral ideal with Z-basis a, b + c*omega in Hermite normal form."""

    __slots__ = ("field", "a", "b", "c")

    def __init__(self, field: IQField, a: int, b: int, c: int):
        self.field, self.a, self.b, self.c = field, a, b, c

    def __eq__(self, other):
        return isinstance(other, Ideal) and (self.field.disc, self.a, self.b, self.c) == (other.field.disc, other.a, other.b, other.c)

    def __hash__(self):
        return hash((self.field.disc, self.a, self.b, self.c))

    def __repr__(self):
        return f"Ideal[{self.a}, {self.b}+{self.c}w]"

    @property
    def norm(self) -> int:
        return self.a * self.c

    @property
    def hnf(self) -> tuple[int, int, int]:
        return (self.a, self.b, self.c)

    @property
    def basis(self) -> tuple[Elem, Elem]:
        return (self.a, 0), (self.b, self.c)

    def _closed_under_omega(self) -> bool:
        K = self.field
        return all(self.contains(K.mul(v, (0, 1))) for v in self.basis)

    def contains(self, x: Elem | int) -> bool:
        if isinstance(x, int):
            x = (x, 0)
        X, Y = x
        if Y % self.c:
            return False
        q = Y // self.c
        return (X - q * self.b) % self.a == 0

    def reduce(self, x: Elem) -> Elem:
        X, Y = x
        q, yr = divmod(Y, self.c)
        return ((X - q * self.b) % self.a, yr)

    def __mul__(self, other: Ideal) -> Ideal:
        K = self.field
        vecs = [K.mul(u, v) for u in self.basis for v in other.basis]
        return K._ideal_from_lattice(vecs)

    def __pow__(self, e: int) -> Ideal:
        if e < 0:
            raise InputError("negative ideal power")
        result = self.field.unit_ideal
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def conj(self) -> Ideal:
        K = self.field
        return K._ideal_from_lattice([K.conj(v) for v in self.basis])

    def divide_by_integer(self, k: int) -> Ideal:
        if self.a % k or self.b % k or self.c % k:
            raise InputError(f"{self} is not divisible by {k}")
        return Ideal(self.field, self.a // k, self.b // k, self.c // k)

    def contains_ideal(self, other: Ideal) -> bool:
        return all(self.contains(v) for v in other.basis)

    def is_divisible_by(self, other: Ideal) -> bool:
        """True when other | self."""
        return other.contains_ideal(self)

    def divide(self, other: Ideal) -> Ideal:
        """self / other for an ideal other dividing self."""
        if not self.is_divisible_by(other):
            raise InputError(f"{other} does not divide {self}")
        return (self * other.conj()).divide_by_integer(other.norm)

    def is_coprime(self, other: Ideal) -> bool:
        return (self + other) == self.field.unit_ideal

    def __add__(self, other: Ideal) -> Ideal:
        return self.field._ideal_from_lattice(list(self.basis) + list(other.basis))

    def factor(self) -> list[tuple[Ideal, int]]:
        out = []
        rest = self
        for ell in sorted(factor(self.norm)) if self.norm > 1 else []:
            for P in self.field.prime_ideals_above(ell):
                e = 0
                while rest.is_divisible_by(P):
                    rest = rest.divide(P)
                    e += 1
                if e:
                    out.append((P, e))
        return out

    def to_json(self) -> list[int]:
        return [self.a, self.b, self.c]


@lru_cache(maxsize=None)
def _primes_above(disc: int, ell: int) -> tuple[Ideal, ...]:
    if not is_prime(ell):
        raise InputError(f"{ell} is not prime")
    K = quadratic_field(disc)
    kind = K.splitting_type(ell)
    if kind == "inert":
        return (Ideal(K, ell, 0, ell),)
    roots = [r for r in range(ell) if (r * r - K.t * r + K.n) % ell == 0]
    bs = sorted({(-r) % ell for r in roots})
    ideals = tuple(K.ideal_hnf(ell, b, 1) for b in bs)
    if kind == "ramified":
        return ideals[:1]
    return ideals


# ---------------------------------------------------------------------------
# binary quadratic forms

Form = tuple[int, int, int]


def reduce_form(f: Form) -> Form:
    return reduce_form_with_basis(f, ((1, 0), (0, 1)))[0]


def reduce_form_with_basis(f: Form, basis):
    """Reduce a positive definite form, carrying the lattice basis along.

    ``basis = (alpha1, alpha2)`` with f(x, y) proportional to N(x*alpha1 + y*alpha2);
    translations and the swap act on the basis by SL2(Z).
    """
    a, b, c = f
    (u1, v1), (u2, v2) = basis
    while True:
        k = (a - b) // (2 * a)
        if k:
            c = a * k * k + b * k + c
            b = b + 2 * a * k
            u2, v2 = u2 + k * u1, v2 + k * v1
        if a > c or (a == c and b < 0):
            a, b, c = c, -b, a
            (u1, v1), (u2, v2) = (u2, v2), (-u1, -v1)
            continue
        break
    if b == -a:  # pragma: no cover - excluded by the translation range
        c = a + b + c
        b = a
        u2, v2 = u2 + u1, v2 + v1
    return (a, b, c), ((u1, v1), (u2, v2))


def compose_forms(f1: Form, f2: Form) -> Form:
    """Gauss composition of primitive forms of equal discriminant (reduced)."""
    a1, b1, c1 = f1
    a2, b2, c2 = f2
    D = b1 * b1 - 4 * a1 * c1
    if b2 * b2 - 4 * a2 * c2 != D:
        raise InputError("forms have different discriminants")
    if a1 > a2:
        a1, b1, c1, a2, b2, c2 = a2, b2, c2, a1, b1, c1
    s = (b1 + b2) // 2
    n = b2 - s
    if a2 % a1 == 0:
        y1, d = 0, a1
    else:
        d, u, _ = _egcd(a2, a1)
        y1 = u
    if s % d == 0:
        y2, x2, d1 = -1, 0, d
    else:
        d1, u, v = _egcd(s, d)
        x2, y2 = u, -v
    v1, v2 = a1 // d1, a2 // d1
    r = (y1 * y2 * n - x2 * c2) % v1
    b3 = b2 + 2 * v2 * r
    a3 = v1 * v2
    c3 = (b3 * b3 - D) // (4 * a3)
    return reduce_form((a3, b3, c3))


def reduced_forms(disc: int) -> list[Form]:
    """All reduced primitive positive definite forms of discriminant disc."""
    if disc >= 0 or disc % 4 not in (0, 1):
        raise InputError(f"{disc} is not a negative discriminant")
    out = []
    a = 1
    while 3 * a * a <= -disc:
        for b in range(-a + 1, a + 1):
            if (b - disc) % 2:
                continue
            num = b * b - disc
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a or (c == a and b < 0):
                continue
            if math.gcd(math.gcd(a, b), c) != 1:
                continue
            out.append((a, b, c))
        a += 1
    return out


def form_identity(disc: int) -> Form:
    return reduce_form((1, disc % 2, (disc % 2 - disc) // 4))


def form_inverse(f: Form) -> Form:
    a, b, c = f
    return reduce_form((a, -b, c))


class ClassGroup:
    """Cl(O_K) realized on reduced binary quadratic forms."""

    def __init__(self, K: IQField):
        self.field = K
        forms = reduced_forms(K.disc)
        self.identity_form = form_identity(K.disc)
        self.structure: GroupStructure = abelian_structure(forms, compose_forms, self.identity_form)
        self.group: FiniteAbelianGroup = self.structure.group
        self.order = len(forms)
        self._form_of = {v: f for f, v in self.structure.dlog.items()}

    def __repr__(self):
        return f"ClassGroup({self.field.disc}: {list(self.group.invariants)})"

    def form_of_ideal(self, ideal: Ideal) -> Form:
        A, Bp = ideal.a // ideal.c, ideal.b // ideal.c
        K = self.field
        return reduce_form((A, 2 * Bp + K.t, (Bp * Bp + K.t * Bp + K.n) // A))

    def ideal_of_form(self, f: Form) -> Ideal:
        a, b, _ = f
        return self.field.ideal_hnf(a, ((b - self.field.t) // 2) % a, 1)

    def class_of(self, ideal: Ideal) -> tuple:
        return self.structure.dlog[self.form_of_ideal(ideal)]

    def form_of_class(self, x: tuple) -> Form:
        return self._form_of[self.group.reduce(x)]

    def prime_in_class(self, x: tuple, avoid: int = 1) -> Ideal:
        """A prime ideal of degree one in the class x with norm prime to avoid."""
        target = self.group.reduce(x)
        ell = 2
        while True:
            if avoid % ell and self.field.splitting_type(ell) != "inert":
                for P in self.field.prime_ideals_above(ell):
                    if self.class_of(P) == target:
                        return P
            ell += 1
            while not is_prime(ell):
                ell += 1

    def generator_primes(self, avoid: int = 1) -> list[Ideal]:
        return [self.prime_in_class(g, avoid) for g in self.group.generators()]

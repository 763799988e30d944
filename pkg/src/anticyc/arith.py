"""Exact arithmetic kernel.

Integers and rationals come from Python itself. This module adds:

* Smith normal form with unimodular transforms (wrapping sympy),
* the Kronecker symbol,
* finite-precision p-adic integers with Teichmuller lifts, logarithm,
  exponential and principal roots,
* :class:`ValueRing`, the order ``O_K[zeta_M]`` in which character values,
  Hecke eigenvalues and roots of unity live, with its complex and p-adic
  embeddings,
* :class:`ResidueRing` quotients of a value ring by a rational integer,
* finite abelian groups in invariant-factor form together with a generic
  structure finder for groups given by an enumerated multiplication.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, reduce
from itertools import product
from typing import Callable, Hashable, Iterable, Iterator, Sequence

import mpmath
from sympy import QQ, ZZ, Matrix, cyclotomic_poly, factorint, isprime, symbols
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.normalforms import smith_normal_decomp

from .errors import InputError, NoRoot, PreconditionFailed

Rational = int | Fraction


# ---------------------------------------------------------------------------
# integer utilities

def is_prime(n: int) -> bool:
    return n >= 2 and bool(isprime(n))


def factor(n: int) -> dict[int, int]:
    """Prime factorization of a positive integer as ``{prime: exponent}``."""
    if n < 1:
        raise InputError(f"cannot factor {n}")
    return {int(q): int(e) for q, e in factorint(n).items()}


def valuation(n: int, p: int) -> int:
    if n == 0:
        raise InputError("valuation of zero")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def lcm(*values: int) -> int:
    return reduce(lambda a, b: a * b // math.gcd(a, b), values, 1)


def crt_pair(r1: int, m1: int, r2: int, m2: int) -> int:
    """Solution mod m1*m2 of x = r1 (m1), x = r2 (m2) for coprime moduli."""
    g, u, _ = _egcd(m1, m2)
    if g != 1:
        raise InputError("moduli are not coprime")
    return (r1 + (r2 - r1) * u * m1) % (m1 * m2)


def _egcd(a: int, b: int) -> tuple[int, int, int]:
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def kronecker_symbol(D: int, ell: int) -> int:
    """Kronecker symbol (D / ell) for a prime ell."""
    if not is_prime(ell):
        raise InputError(f"{ell} is not prime")
    if D % ell == 0:
        return 0
    if ell == 2:
        return 1 if D % 8 in (1, 7) else -1
    return 1 if pow(D % ell, (ell - 1) // 2, ell) == 1 else -1


def kronecker_character(D: int, n: int) -> int:
    """The quadratic character n -> (D/n), extended multiplicatively to n >= 1."""
    if n < 1:
        raise InputError("kronecker_character expects n >= 1")
    value = 1
    for q, e in factor(n).items() if n > 1 else ():
        value *= kronecker_symbol(D, q) ** e
    return value


# ---------------------------------------------------------------------------
# Smith normal form

@dataclass(frozen=True)
class SmithForm:
    """``left * M * right`` is diagonal with entries ``invariants``."""

    invariants: tuple[int, ...]
    left: tuple[tuple[int, ...], ...]
    right: tuple[tuple[int, ...], ...]


def _identity(n: int) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def smith_normal_form(matrix: Sequence[Sequence[int]]) -> SmithForm:
    rows = len(matrix)
    cols = len(matrix[0]) if rows else 0
    if rows == 0 or cols == 0:
        return SmithForm((), _identity(rows), _identity(cols))
    M = DomainMatrix([[ZZ(int(x)) for x in row] for row in matrix], (rows, cols), ZZ)
    D, U, V = smith_normal_decomp(M)
    U = [[int(x) for x in row] for row in U.to_list()]
    V = [[int(x) for x in row] for row in V.to_list()]
    D = D.to_list()
    diag = [int(D[i][i]) for i in range(min(rows, cols))]
    for i, d in enumerate(diag):
        if d < 0:
            diag[i] = -d
            U[i] = [-x for x in U[i]]
    for a, b in zip(diag, diag[1:]):
        if (a == 0 and b != 0) or (a != 0 and b % a):
            raise AssertionError("divisibility chain broken")  # pragma: no cover
    return SmithForm(tuple(diag), tuple(map(tuple, U)), tuple(map(tuple, V)))


def integer_inverse(matrix: Sequence[Sequence[int]]) -> list[list[int]]:
    """Inverse of a unimodular integer matrix."""
    n = len(matrix)
    inv = DomainMatrix([[QQ(int(x)) for x in row] for row in matrix], (n, n), QQ).inv().to_list()
    if any(x.denominator != 1 for row in inv for x in row):
        raise InputError("matrix is not unimodular")
    return [[int(x.numerator) for x in row] for row in inv]


# ---------------------------------------------------------------------------
# p-adic integers

class PadicInt:
    """An element of Z_p known modulo p^prec."""

    __slots__ = ("p", "prec", "value")

    def __init__(self, value: Rational, p: int, prec: int):
        if prec < 0:
            raise InputError("negative p-adic precision")
        mod = p ** prec
        if isinstance(value, Fraction):
            if value.denominator % p == 0:
                raise InputError(f"{value} is not p-integral for p={p}")
            value = value.numerator * pow(value.denominator, -1, mod) if mod > 1 else 0
        self.p = p
        self.prec = prec
        self.value = int(value) % mod

    @property
    def modulus(self) -> int:
        return self.p ** self.prec

    def _coerce(self, other) -> PadicInt:
        if isinstance(other, PadicInt):
            if other.p != self.p:
                raise InputError("p-adic prime mismatch")
            return other
        if isinstance(other, (int, Fraction)):
            return PadicInt(other, self.p, self.prec)
        return NotImplemented

    def _combine(self, other, op):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        prec = min(self.prec, other.prec)
        return PadicInt(op(self.value, other.value), self.p, prec)

    def __add__(self, other):
        return self._combine(other, lambda a, b: a + b)

    __radd__ = __add__

    def __sub__(self, other):
        return self._combine(other, lambda a, b: a - b)

    def __rsub__(self, other):
        return self._combine(other, lambda a, b: b - a)

    def __mul__(self, other):
        return self._combine(other, lambda a, b: a * b)

    __rmul__ = __mul__

    def __neg__(self):
        return PadicInt(-self.value, self.p, self.prec)

    def inverse(self) -> PadicInt:
        if not self.is_unit():
            raise ZeroDivisionError(f"{self} is not a p-adic unit")
        return PadicInt(pow(self.value, -1, self.modulus), self.p, self.prec)

    def __truediv__(self, other):
        other = self._coerce(other)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return PadicInt(pow(self.value, e, self.modulus), self.p, self.prec)

    def __eq__(self, other):
        other = self._coerce(other) if not isinstance(other, PadicInt) else other
        if other is NotImplemented or not isinstance(other, PadicInt) or other.p != self.p:
            return False
        mod = self.p ** min(self.prec, other.prec)
        return (self.value - other.value) % mod == 0

    __hash__ = None

    def is_unit(self) -> bool:
        return self.prec > 0 and self.value % self.p != 0

    def valuation(self) -> int:
        """Valuation, capped at the precision for values known to be 0."""
        if self.value == 0:
            return self.prec
        return valuation(self.value, self.p)

    def reduce(self, prec: int) -> PadicInt:
        if prec > self.prec:
            raise InputError("cannot widen p-adic precision")
        return PadicInt(self.value, self.p, prec)

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"PadicInt({self.value} mod {self.p}^{self.prec})"


def teichmuller(a: int, p: int, N: int) -> PadicInt:
    if a % p == 0:
        raise InputError(f"{a} is not a unit mod {p}")
    mod = p ** N
    return PadicInt(pow(a, p ** (N - 1), mod), p, N)


def _split_val(x: int, p: int, prec: int) -> tuple[int, int]:
    """Write x = p^s * y mod p^prec; returns (s, y)."""
    s = valuation(x, p)
    return s, (x // p ** s) % p ** (prec - s)


def padic_log(u: PadicInt) -> PadicInt:
    """Iwasawa-free logarithm of a principal unit (p odd)."""
    p, N = u.p, u.prec
    if p == 2:
        raise InputError("p-adic log implemented for odd p only")
    if u.value % p != 1 % p:
        raise InputError("logarithm needs a principal unit")
    x = (u.value - 1) % p ** N
    if x == 0:
        return PadicInt(0, p, N)
    s, y = _split_val(x, p, N)
    mod = p ** N
    total = 0
    n = 1
    # v_p(x^n / n) >= s*n - floor(log_p n), which increases with n
    while s * n - _ilog(n, p) < N:
        v = valuation(n, p)
        shift = s * n - v
        if shift < N:
            term = p ** shift * pow(y, n, mod) * pow(n // p ** v, -1, mod)
            total += term if n % 2 else -term
        n += 1
    return PadicInt(total, p, N)


def _ilog(n: int, p: int) -> int:
    k = 0
    while p ** (k + 1) <= n:
        k += 1
    return k


def padic_exp(x: PadicInt) -> PadicInt:
    """Exponential on pZ_p (p odd)."""
    p, N = x.p, x.prec
    if p == 2:
        raise InputError("p-adic exp implemented for odd p only")
    if x.value % p:
        raise InputError("exponential needs an argument divisible by p")
    if x.value == 0:
        return PadicInt(1, p, N)
    s, y = _split_val(x.value, p, N)
    mod = p ** N
    total = 1
    fact_unit, fact_val = 1, 0
    n = 1
    while True:
        m = n
        while m % p == 0:
            m //= p
            fact_val += 1
        fact_unit = fact_unit * m % mod
        shift = s * n - fact_val
        if shift >= N and n * (s - 1 / (p - 1)) >= N + 1:
            break
        if shift < N:
            total += p ** shift * pow(y, n, mod) * pow(fact_unit, -1, mod)
        n += 1
    return PadicInt(total, p, N)


def padic_root(u: PadicInt, n: int, seed: int | None = None) -> PadicInt:
    """An n-th root of u in Z_p.

    Without a seed, u must be a principal unit and the principal root
    (the one congruent to 1 mod p) is returned. With a seed, Newton iteration
    starts from it; the seed must be a simple root mod p.
    """
    p, N = u.p, u.prec
    if n < 1:
        raise InputError("root index must be positive")
    if seed is None:
        if u.value % p != 1:
            raise NoRoot(f"{u} is not a principal unit and no seed was supplied")
        v = valuation(n, p) if n % p == 0 else 0
        if v:
            if (u.value - 1) % p ** min(N, 1 + v):
                raise NoRoot(f"principal unit {u} has no principal {n}-th root")
            log_u = padic_log(u)
            q = n // p ** v
            scaled = PadicInt(log_u.value // p ** v, p, N - v) * PadicInt(Fraction(1, q), p, N - v)
            return padic_exp(scaled)
        seed = 1
    if (n * seed) % p == 0 or (pow(seed, n, p) - u.value) % p:
        raise NoRoot(f"seed {seed} is not a simple root of x^{n} = {u} mod {p}")
    mod = p ** N
    x = seed % mod
    for _ in range(max(1, N.bit_length()) + 2):
        x = (x - (pow(x, n, mod) - u.value) * pow(n * pow(x, n - 1, mod), -1, mod)) % mod
    root = PadicInt(x, p, N)
    if root ** n != u:  # pragma: no cover
        raise NoRoot("Hensel iteration did not converge")
    return root


def principal_power(base: PadicInt, exponent: PadicInt) -> PadicInt:
    """base^exponent for a principal unit base and a p-adic exponent.

    The exponent needs precision prec(base) - 1 for a result exact mod p^prec.
    """
    p = base.p
    if base.value % p != 1:
        raise InputError("principal_power needs a principal unit base")
    prec = min(base.prec, exponent.prec + 1)
    return PadicInt(pow(base.value, exponent.value, p ** prec), p, prec)


def kappa_eval(i: int, z: int, p: int, N: int) -> tuple[PadicInt, PadicInt]:
    """(omega(z)^i, exponent) with (1+p)^exponent = z * omega(z)^{-1} mod p^N.

    The exponent is determined modulo p^(N-1).
    """
    if N < 2:
        raise InputError("kappa_eval needs precision at least 2")
    w = teichmuller(z, p, N)
    bracket = PadicInt(z, p, N) * w.inverse()
    log_b = padic_log(bracket)
    log_g = padic_log(PadicInt(1 + p, p, N))
    exponent = PadicInt(log_b.value // p, p, N - 1) * PadicInt(log_g.value // p, p, N - 1).inverse()
    return w ** (i % (p - 1)), exponent


# ---------------------------------------------------------------------------
# quadratic integers as coordinate pairs over (1, omega)

@lru_cache(maxsize=None)
def omega_data(disc: int) -> tuple[int, int]:
    """(t, n) with omega^2 = t*omega - n."""
    if disc % 4 == 0:
        return 0, -disc // 4
    if disc % 4 == 1:
        return 1, (1 - disc) // 4
    raise InputError(f"{disc} is not a discriminant")


def qmul(x: tuple, y: tuple, t: int, n: int) -> tuple:
    a, b = x
    c, d = y
    bd = b * d
    return (a * c - n * bd, a * d + b * c + t * bd)


def qconj(x: tuple, t: int) -> tuple:
    return (x[0] + t * x[1], -x[1])


def qnorm(x: tuple, t: int, n: int) -> int:
    a, b = x
    return a * a + t * a * b + n * b * b


def _norm_coord(c):
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


# ---------------------------------------------------------------------------
# the value ring O_K[zeta_M]

def _poly_divmod_oq(num: list, den: list, t: int, n: int) -> tuple[list, list]:
    """Division of polynomials over O_K by a monic divisor."""
    num = list(num)
    dd = len(den) - 1
    quo = [(0, 0)] * max(0, len(num) - dd)
    for k in range(len(num) - 1, dd - 1, -1):
        c = num[k]
        if c == (0, 0):
            continue
        quo[k - dd] = c
        for i, g in enumerate(den):
            prod_ = qmul(c, g, t, n)
            a = num[k - dd + i]
            num[k - dd + i] = (a[0] - prod_[0], a[1] - prod_[1])
    return quo, num[:dd]


class ValueRing:
    """The ring O_K[x]/(g) with g the minimal polynomial of zeta_M over K.

    Coordinates are taken over the basis omega^a x^b (a in {0,1}, b < deg g),
    index 2b + a. When K is not contained in Q(zeta_M), g is the cyclotomic
    polynomial; when it is (|D_K| divides M), g is the degree phi(M)/2 factor
    of the cyclotomic polynomial having exp(2 pi i/M) as a root.
    Use :func:`value_ring` to obtain shared instances.
    """

    def __init__(self, disc: int, order: int):
        if order < 1:
            raise InputError("cyclotomic order must be positive")
        self.disc = disc
        self.order = order
        self.t, self.n = omega_data(disc)
        self.contains_field = order % abs(disc) == 0
        self.modulus = self._minimal_polynomial()
        self.degree = len(self.modulus) - 1
        self.dim = 2 * self.degree
        self._table = self._structure_constants()
        self._zeta_powers: list[VElem] | None = None
        self._conj_images: list[VElem] | None = None

    def __repr__(self):
        return f"ValueRing(D={self.disc}, M={self.order})"

    # construction ---------------------------------------------------------
    def _minimal_polynomial(self) -> tuple:
        x = symbols("x")
        phi = [int(c) for c in reversed(cyclotomic_poly(self.order, x, polys=True).all_coeffs())]
        phi_oq = [(c, 0) for c in phi]
        if not self.contains_field:
            return tuple(phi_oq)
        M = self.order
        exps = [j for j in range(1, M) if math.gcd(j, M) == 1 and kronecker_character(self.disc, j) == 1]
        with mpmath.workdps(60):
            coeffs = [mpmath.mpc(1)]
            for j in exps:
                root = mpmath.expjpi(mpmath.mpf(2 * j) / M)
                nxt = [mpmath.mpc(0)] * (len(coeffs) + 1)
                for k, c in enumerate(coeffs):
                    nxt[k + 1] += c
                    nxt[k] -= c * root
                coeffs = nxt
            half = mpmath.sqrt(-self.disc) / 2
            g = []
            for c in coeffs:
                v = c.imag / half
                u = c.real - v * self.t / 2
                ui, vi = int(mpmath.nint(u)), int(mpmath.nint(v))
                if abs(u - ui) > 1e-30 or abs(v - vi) > 1e-30:  # pragma: no cover
                    raise AssertionError("cyclotomic factor is not integral")
                g.append((ui, vi))
        _, rem = _poly_divmod_oq(phi_oq, g, self.t, self.n)
        if any(r != (0, 0) for r in rem):  # pragma: no cover
            raise AssertionError("computed factor does not divide the cyclotomic polynomial")
        return tuple(g)

    def _reduce_poly(self, poly: list) -> tuple:
        if len(poly) > self.degree:
            _, poly = _poly_divmod_oq(poly, list(self.modulus), self.t, self.n)
        poly = list(poly) + [(0, 0)] * (self.degree - len(poly))
        out = []
        for a, b in poly:
            out.extend((a, b))
        return tuple(out)

    def _structure_constants(self):
        d = self.degree
        basis = []
        for b in range(d):
            for a in range(2):
                basis.append([(0, 0)] * b + [(1, 0) if a == 0 else (0, 1)])
        table = []
        for i in range(self.dim):
            row = []
            for j in range(self.dim):
                pi, pj = basis[i], basis[j]
                poly = [(0, 0)] * (len(pi) + len(pj) - 1)
                for k1, c1 in enumerate(pi):
                    for k2, c2 in enumerate(pj):
                        pr = qmul(c1, c2, self.t, self.n)
                        a = poly[k1 + k2]
                        poly[k1 + k2] = (a[0] + pr[0], a[1] + pr[1])
                coords = self._reduce_poly(poly)
                row.append(tuple((k, c) for k, c in enumerate(coords) if c))
            table.append(row)
        return table

    # elements -------------------------------------------------------------
    def __call__(self, value) -> VElem:
        if isinstance(value, VElem):
            if value.ring is self:
                return value
            return value.ring.lift_to(value, self)
        if isinstance(value, (int, Fraction)):
            return VElem(self, (value,) + (0,) * (self.dim - 1))
        if isinstance(value, tuple) and len(value) == 2:
            return VElem(self, tuple(value) + (0,) * (self.dim - 2))
        raise InputError(f"cannot coerce {value!r} into {self}")

    def from_coords(self, coords: Sequence[Rational]) -> VElem:
        if len(coords) != self.dim:
            raise InputError("coordinate vector has the wrong length")
        return VElem(self, tuple(coords))

    @property
    def zero(self) -> VElem:
        return self(0)

    @property
    def one(self) -> VElem:
        return self(1)

    @property
    def omega(self) -> VElem:
        return self((0, 1))

    @property
    def zeta(self) -> VElem:
        if self.degree == 1:
            g0 = self.modulus[0]
            return self((-g0[0], -g0[1]))
        return VElem(self, (0, 0, 1) + (0,) * (self.dim - 3))

    def zeta_power(self, k: int) -> VElem:
        if self._zeta_powers is None:
            powers = [self.one]
            z = self.zeta
            for _ in range(self.order - 1):
                powers.append(powers[-1] * z)
            self._zeta_powers = powers
        return self._zeta_powers[k % self.order]

    def mul_coords(self, u: tuple, v: tuple) -> list:
        out = [0] * self.dim
        table = self._table
        for i, ci in enumerate(u):
            if not ci:
                continue
            row = table[i]
            for j, cj in enumerate(v):
                if not cj:
                    continue
                cc = ci * cj
                for k, c in row[j]:
                    out[k] += cc * c
        return out

    def conj_images(self) -> list[VElem]:
        if self._conj_images is None:
            zinv = self.zeta_power(-1)
            wbar = self((self.t, -1))
            imgs = []
            zb = self.one
            for _ in range(self.degree):
                imgs.append(zb)
                imgs.append(wbar * zb)
                zb = zb * zinv
            self._conj_images = imgs
        return self._conj_images

    def lift_to(self, elem: VElem, target: ValueRing) -> VElem:
        """Image under the embedding sending zeta_M to zeta_{M'}^{M'/M}."""
        if target.disc != self.disc or target.order % self.order:
            raise InputError(f"no embedding {self} -> {target}")
        step = target.order // self.order
        zt = target.zeta_power(step)
        result = target.zero
        zb = target.one
        for b in range(self.degree):
            a0, a1 = elem.c[2 * b], elem.c[2 * b + 1]
            if a0 or a1:
                result = result + target((a0, a1)) * zb
            zb = zb * zt
        return result

    def complex_embedding(self, elem: VElem, dps: int = 40):
        with mpmath.workdps(dps):
            w = (self.t + mpmath.sqrt(self.disc)) / 2
            z = mpmath.expjpi(mpmath.mpf(2) / self.order)
            total = mpmath.mpc(0)
            zb = mpmath.mpc(1)
            for b in range(self.degree):
                a0, a1 = elem.c[2 * b], elem.c[2 * b + 1]
                total += (_mpq(a0) + _mpq(a1) * w) * zb
                zb *= z
            return total

    # embeddings into residue fields and Z_p ------------------------------
    def residue_embeddings(self, q: int, prec: int = 1) -> list[tuple[int, int]]:
        """All pairs (omega_q, zeta_q) mod q^prec giving ring maps to Z/q^prec.

        Requires q to split completely; otherwise returns the maps that exist.
        """
        mod = q ** prec
        out = []
        for r in range(q):
            if (r * r - self.t * r + self.n) % q:
                continue
            w = _hensel_quadratic(r, self.t, self.n, q, prec)
            if self.order == 1:
                candidates = [1]
            elif (q - 1) % self.order:
                continue
            else:
                candidates = _roots_of_unity_of_order(self.order, q, prec)
            for z in candidates:
                val = 0
                for coef in reversed(self.modulus):
                    val = (val * z + coef[0] + coef[1] * w) % mod
                if val == 0:
                    out.append((w, z))
        return out

    def evaluate_mod(self, elem: VElem, w: int, z: int, mod: int) -> int:
        total = 0
        zb = 1
        for b in range(self.degree):
            a0, a1 = elem.c[2 * b], elem.c[2 * b + 1]
            total += (_mod_rational(a0, mod) + _mod_rational(a1, mod) * w) * zb
            zb = zb * z % mod
        return total % mod

    def padic_embedding(self, p: int, N: int) -> PadicEmbedding:
        return PadicEmbedding(self, p, N)


def _mpq(c: Rational):
    if isinstance(c, Fraction):
        return mpmath.mpf(c.numerator) / c.denominator
    return mpmath.mpf(c)


def _mod_rational(c: Rational, mod: int) -> int:
    if isinstance(c, Fraction):
        return c.numerator * pow(c.denominator, -1, mod) % mod
    return c % mod


def _hensel_quadratic(r: int, t: int, n: int, p: int, prec: int) -> int:
    mod = p ** prec
    x = r
    if (2 * r - t) % p == 0:
        if prec > 1:
            raise NoRoot("ramified prime: omega has no unique p-adic image")
        return r % mod
    for _ in range(prec.bit_length() + 2):
        x = (x - (x * x - t * x + n) * pow(2 * x - t, -1, mod)) % mod
    return x


def _roots_of_unity_of_order(M: int, p: int, prec: int) -> list[int]:
    """Teichmuller lifts of the residues of exact order M, sorted by residue."""
    out = []
    qs = list(factor(M)) if M > 1 else []
    for r in range(1, p):
        if pow(r, M, p) != 1:
            continue
        if any(pow(r, M // q, p) == 1 for q in qs):
            continue
        out.append(teichmuller(r, p, prec).value)
    return out


class PadicEmbedding:
    """i_p: omega -> the root defining the designated prime above p,
    zeta_M -> the Teichmuller lift of the smallest residue of order M
    that is a root of g."""

    def __init__(self, ring: ValueRing, p: int, N: int):
        self.ring, self.p, self.N = ring, p, N
        t, n = ring.t, ring.n
        roots = [r for r in range(p) if (r * r - t * r + n) % p == 0]
        if len(roots) != 2:
            raise PreconditionFailed(f"p={p} does not split in Q(sqrt({ring.disc}))")
        # designated prime [p, b + omega] with the smallest b; omega = -b there
        b = min((-r) % p for r in roots)
        self.omega = _hensel_quadratic((-b) % p, t, n, p, N)
        if ring.order > 1 and (p - 1) % ring.order:
            raise PreconditionFailed(f"{ring.order} does not divide p-1={p - 1}")
        mod = p ** N
        for z in (_roots_of_unity_of_order(ring.order, p, N) if ring.order > 1 else [1]):
            val = 0
            for coef in reversed(ring.modulus):
                val = (val * z + coef[0] + coef[1] * self.omega) % mod
            if val == 0:
                self.zeta = z
                break
        else:  # pragma: no cover
            raise AssertionError("no p-adic root of the cyclotomic factor")

    def __call__(self, elem: VElem) -> PadicInt:
        if not isinstance(elem, VElem):
            elem = self.ring(elem)
        elif elem.ring is not self.ring:
            elem = self.ring(elem)
        mod = self.p ** self.N
        return PadicInt(self.ring.evaluate_mod(elem, self.omega, self.zeta, mod), self.p, self.N)


class VElem:
    """Immutable element of a :class:`ValueRing`."""

    __slots__ = ("ring", "c", "_hash")

    def __init__(self, ring: ValueRing, coords: tuple):
        self.ring = ring
        self.c = tuple(_norm_coord(x) for x in coords)
        self._hash = None

    def _other(self, other) -> VElem | None:
        if isinstance(other, VElem):
            if other.ring is self.ring:
                return other
            if other.ring.disc == self.ring.disc:
                if self.ring.order % other.ring.order == 0:
                    return self.ring(other)
            return None
        if isinstance(other, (int, Fraction)) or (isinstance(other, tuple) and len(other) == 2):
            return self.ring(other)
        return None

    def __add__(self, other):
        o = self._other(other)
        if o is None:
            if isinstance(other, VElem) and other.ring.order % self.ring.order == 0:
                return other + self
            return NotImplemented
        return VElem(self.ring, tuple(a + b for a, b in zip(self.c, o.c)))

    __radd__ = __add__

    def __neg__(self):
        return VElem(self.ring, tuple(-a for a in self.c))

    def __sub__(self, other):
        o = self._other(other)
        if o is None:
            if isinstance(other, VElem) and other.ring.order % self.ring.order == 0:
                return (-other) + self
            return NotImplemented
        return VElem(self.ring, tuple(a - b for a, b in zip(self.c, o.c)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return VElem(self.ring, tuple(a * other for a in self.c))
        o = self._other(other)
        if o is None:
            if isinstance(other, VElem) and other.ring.order % self.ring.order == 0:
                return other * self
            return NotImplemented
        return VElem(self.ring, tuple(self.ring.mul_coords(self.c, o.c)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return VElem(self.ring, tuple(Fraction(a) / other for a in self.c))
        return self * _as_velem(self.ring, other).inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = self.ring.one
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def inverse(self) -> VElem:
        """Inverse in the fraction field, via the norm to Q."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        # product of the conjugates over K(zeta)/Q using the Galois action
        # is expensive in general; use linear algebra on multiplication instead
        ring = self.ring
        rows = [self.ring.mul_coords(self.c, tuple(int(i == j) for j in range(ring.dim))) for i in range(ring.dim)]
        mat = Matrix(rows).T
        target = Matrix([1] + [0] * (ring.dim - 1))
        sol = mat.LUsolve(target)
        return VElem(ring, tuple(Fraction(int(x.p), int(x.q)) for x in sol))

    def conj(self) -> VElem:
        imgs = self.ring.conj_images()
        out = [0] * self.ring.dim
        for i, c in enumerate(self.c):
            if c:
                for k, v in enumerate(imgs[i].c):
                    if v:
                        out[k] += c * v
        return VElem(self.ring, tuple(out))

    def is_zero(self) -> bool:
        return not any(self.c)

    def is_integral(self) -> bool:
        return all(not isinstance(x, Fraction) for x in self.c)

    def denominator(self) -> int:
        return lcm(*(x.denominator for x in self.c if isinstance(x, Fraction)))

    def rational_value(self) -> Rational | None:
        if all(x == 0 for x in self.c[1:]):
            return self.c[0]
        return None

    def __eq__(self, other):
        o = self._other(other)
        if o is None:
            if isinstance(other, VElem) and other.ring.disc == self.ring.disc and other.ring.order % self.ring.order == 0:
                return other.ring(self) == other
            return False
        return self.c == o.c

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring.disc, self.ring.order, self.c))
        return self._hash

    def __repr__(self):
        return f"VElem({list(self.c)})"


def _as_velem(ring: ValueRing, value) -> VElem:
    return value if isinstance(value, VElem) else ring(value)


@lru_cache(maxsize=None)
def value_ring(disc: int, order: int) -> ValueRing:
    """Shared ValueRing instance for (D_K, M); odd M is doubled when -1 is needed."""
    return ValueRing(disc, order)


# ---------------------------------------------------------------------------
# residue rings

class ResidueRing:
    """Quotient of a ValueRing by a rational integer n."""

    def __init__(self, parent: ValueRing, n: int):
        if n < 1:
            raise InputError("residue modulus must be positive")
        self.parent = parent
        self.n = n

    def __repr__(self):
        return f"ResidueRing({self.parent!r}, n={self.n})"

    def __call__(self, value) -> RElem:
        if isinstance(value, RElem):
            if value.ring.parent is not self.parent or value.ring.n % self.n:
                raise InputError("incompatible residue rings")
            return RElem(self, value.c)
        if not isinstance(value, VElem):
            value = self.parent(value)
        elif value.ring is not self.parent:
            value = self.parent(value)
        coords = []
        for c in value.c:
            if isinstance(c, Fraction):
                if math.gcd(c.denominator, self.n) != 1:
                    raise InputError(f"denominator {c.denominator} not invertible mod {self.n}")
                coords.append(c.numerator * pow(c.denominator, -1, self.n) if self.n > 1 else 0)
            else:
                coords.append(c)
        return RElem(self, tuple(coords))

    @property
    def zero(self) -> RElem:
        return self(0)

    @property
    def one(self) -> RElem:
        return self(1)


class RElem:
    __slots__ = ("ring", "c")

    def __init__(self, ring: ResidueRing, coords: tuple):
        self.ring = ring
        n = ring.n
        self.c = tuple(int(x) % n for x in coords)

    def _other(self, other):
        if isinstance(other, RElem):
            if other.ring.parent is not self.ring.parent or other.ring.n != self.ring.n:
                raise InputError("residue ring mismatch")
            return other
        return self.ring(other)

    def __add__(self, other):
        o = self._other(other)
        return RElem(self.ring, tuple(a + b for a, b in zip(self.c, o.c)))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        return RElem(self.ring, tuple(a - b for a, b in zip(self.c, o.c)))

    def __rsub__(self, other):
        return self.ring(other) - self

    def __neg__(self):
        return RElem(self.ring, tuple(-a for a in self.c))

    def __mul__(self, other):
        if isinstance(other, int):
            return RElem(self.ring, tuple(a * other for a in self.c))
        o = self._other(other)
        return RElem(self.ring, tuple(self.ring.parent.mul_coords(self.c, o.c)))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        result = self.ring.one
        for _ in range(e):
            result = result * self
        return result

    def is_zero(self) -> bool:
        return not any(self.c)

    def __eq__(self, other):
        try:
            o = self._other(other)
        except InputError:
            return False
        return self.c == o.c

    def __hash__(self):
        return hash((self.ring.n, self.c))

    def __repr__(self):
        return f"RElem({list(self.c)} mod {self.ring.n})"


# ---------------------------------------------------------------------------
# finite abelian groups

class FiniteAbelianGroup:
    """Z/d_1 x ... x Z/d_k with d_1 | d_2 | ... and every d_i >= 2."""

    def __init__(self, invariants: Sequence[int] = (), labels: Sequence[str] | None = None):
        inv = tuple(int(d) for d in invariants)
        if any(d < 1 for d in inv):
            raise InputError("invariant factors must be positive")
        inv = tuple(d for d in inv if d > 1)
        for a, b in zip(inv, inv[1:]):
            if b % a:
                raise InputError(f"invariant factors {inv} do not form a divisibility chain")
        self.invariants = inv
        self.labels = tuple(labels) if labels is not None else tuple(f"g{i}" for i in range(len(inv)))

    def __repr__(self):
        return f"FiniteAbelianGroup({list(self.invariants)})"

    def __eq__(self, other):
        return isinstance(other, FiniteAbelianGroup) and self.invariants == other.invariants

    def __hash__(self):
        return hash(self.invariants)

    @property
    def rank(self) -> int:
        return len(self.invariants)

    def order(self) -> int:
        return math.prod(self.invariants)

    def identity(self) -> tuple:
        return (0,) * self.rank

    def reduce(self, vector: Iterable[int]) -> tuple:
        vec = tuple(vector)
        if len(vec) != self.rank:
            raise InputError("element has the wrong length")
        return tuple(x % d for x, d in zip(vec, self.invariants))

    def op(self, x: tuple, y: tuple) -> tuple:
        return tuple((a + b) % d for a, b, d in zip(x, y, self.invariants))

    def inverse(self, x: tuple) -> tuple:
        return tuple((-a) % d for a, d in zip(x, self.invariants))

    def power(self, x: tuple, k: int) -> tuple:
        return tuple((a * k) % d for a, d in zip(x, self.invariants))

    def element_order(self, x: tuple) -> int:
        return lcm(*(d // math.gcd(a, d) for a, d in zip(x, self.invariants)))

    def elements(self) -> Iterator[tuple]:
        return product(*(range(d) for d in self.invariants))

    def generators(self) -> list[tuple]:
        return [tuple(int(i == j) for j in range(self.rank)) for i in range(self.rank)]

    def p_part(self, p: int) -> tuple[FiniteAbelianGroup, AbelianHom]:
        """Maximal p-power quotient and the canonical surjection onto it."""
        keep = []
        pinv = []
        for i, d in enumerate(self.invariants):
            q = p ** valuation(d, p)
            if q > 1:
                keep.append(i)
                pinv.append(q)
        target = FiniteAbelianGroup(pinv, [self.labels[i] for i in keep])
        matrix = [[int(i == keep[j]) for j in range(len(keep))] for i in range(self.rank)]
        return target, AbelianHom(self, target, matrix)

    def subgroup_order(self, vectors: Iterable[Sequence[int]]) -> int:
        rows = [list(v) for v in vectors]
        if not rows:
            return 1
        rels = [[d if i == j else 0 for j in range(self.rank)] for i, d in enumerate(self.invariants)]
        quotient = smith_normal_form(rels + rows).invariants
        return self.order() // math.prod(quotient)

    def to_json(self) -> dict:
        return {"invariants": list(self.invariants), "labels": list(self.labels)}


class AbelianHom:
    """Homomorphism given by an integer matrix acting on row vectors."""

    def __init__(self, source: FiniteAbelianGroup, target: FiniteAbelianGroup, matrix: Sequence[Sequence[int]]):
        self.source, self.target = source, target
        self.matrix = [list(row) for row in matrix]
        if len(self.matrix) != source.rank or any(len(r) != target.rank for r in self.matrix):
            raise InputError("homomorphism matrix has the wrong shape")
        for i, d in enumerate(source.invariants):
            if target.reduce([d * m for m in self.matrix[i]]) != target.identity():
                raise InputError("matrix does not define a homomorphism")

    def __call__(self, x: tuple) -> tuple:
        out = [0] * self.target.rank
        for a, row in zip(x, self.matrix):
            if a:
                for j, m in enumerate(row):
                    out[j] += a * m
        return self.target.reduce(out)

    def compose(self, first: AbelianHom) -> AbelianHom:
        """self o first."""
        return AbelianHom(first.source, self.target, [list(self(tuple(row))) for row in first.matrix])

    def p_part(self, p: int, source_pp=None, target_pp=None) -> AbelianHom:
        """Induced map between maximal p-power quotients."""
        sp, sproj = source_pp or self.source.p_part(p)
        tp, tproj = target_pp or self.target.p_part(p)
        keep = [i for i, row in enumerate(sproj.matrix) if any(row)]
        matrix = [list(tproj(self(tuple(int(i == k) for k in range(self.source.rank))))) for i in keep]
        return AbelianHom(sp, tp, matrix)

    def is_bijective(self) -> bool:
        if self.source.order() != self.target.order():
            return False
        return len({self(x) for x in self.source.elements()}) == self.target.order()


class PresentedGroup:
    """Z^n modulo the row lattice of a relation matrix, with its SNF model.

    ``group`` is the invariant-factor group, ``to_group`` converts presentation
    vectors, and ``generator_vectors`` expresses each SNF generator in
    presentation coordinates.
    """

    def __init__(self, n: int, relations: Sequence[Sequence[int]], labels: Sequence[str] | None = None):
        self.n = n
        rels = [list(r) for r in relations]
        if n == 0:
            self.group = FiniteAbelianGroup(())
            self._keep, self._right, self._right_inv, self._inv = [], [], [], []
            return
        snf = smith_normal_form(rels)
        inv = list(snf.invariants) + [0] * (n - len(snf.invariants))
        if any(d == 0 for d in inv):
            raise InputError("presentation defines an infinite group")
        self._right = [list(r) for r in snf.right]
        self._right_inv = integer_inverse(self._right)
        self._keep = [i for i, d in enumerate(inv) if d > 1]
        self._inv = [inv[i] for i in self._keep]
        self.group = FiniteAbelianGroup(self._inv)

    def to_group(self, vector: Sequence[int]) -> tuple:
        if self.n == 0:
            return ()
        out = []
        for idx, d in zip(self._keep, self._inv):
            out.append(sum(v * self._right[k][idx] for k, v in enumerate(vector) if v) % d)
        return tuple(out)

    def generator_vectors(self) -> list[list[int]]:
        return [list(self._right_inv[i]) for i in self._keep]

    def hom_from_images(self, target: FiniteAbelianGroup, images: Sequence[tuple]) -> AbelianHom:
        """The homomorphism sending presentation generator k to images[k]."""
        matrix = []
        for vec in self.generator_vectors():
            acc = [0] * target.rank
            for coef, img in zip(vec, images):
                if coef:
                    for j, a in enumerate(img):
                        acc[j] += coef * a
            matrix.append(list(target.reduce(acc)))
        return AbelianHom(self.group, target, matrix)


def _power(x, k: int, mul: Callable, one):
    result = one
    base = x
    while k:
        if k & 1:
            result = mul(result, base)
        k >>= 1
        if k:
            base = mul(base, base)
    return result


@dataclass
class GroupStructure:
    """Invariant-factor structure of an enumerated abelian group."""

    group: FiniteAbelianGroup
    generators: list
    dlog: dict


def abelian_structure(elements: Sequence[Hashable], mul: Callable, one: Hashable) -> GroupStructure:
    """SNF generators and a full discrete-log table for a finite abelian group.

    Generators are found greedily by order search: each new element outside
    the current span contributes the relation x^k = (span element), and the
    resulting relation matrix is put in Smith form.
    """
    n = len(elements)
    gens: list = []
    rels: list[list[int]] = []
    span = {one: ()}
    for x in elements:
        if len(span) == n:
            break
        if x in span:
            continue
        k, y = 1, x
        while y not in span:
            y = mul(y, x)
            k += 1
        rels = [r + [0] for r in rels]
        rels.append([-v for v in span[y]] + [k])
        new_span = {}
        xp = one
        for j in range(k):
            for s, v in span.items():
                new_span[mul(s, xp)] = v + (j,)
            xp = mul(xp, x)
        span = new_span
        gens.append(x)
    if len(span) != n:
        raise InputError("elements do not form a group under the given law")
    pres = PresentedGroup(len(gens), rels)
    exponent = n
    new_gens = []
    for vec in pres.generator_vectors():
        g = one
        for base, e in zip(gens, vec):
            g = mul(g, _power(base, e % exponent, mul, one))
        new_gens.append(g)
    dlog = {elem: pres.to_group(v) for elem, v in span.items()}
    return GroupStructure(pres.group, new_gens, dlog)

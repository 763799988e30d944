"""Algebraic cofactors of p-adic interpolation formulas.

Everything here is exact: Gamma values are rational multiples of powers of
pi, Euler-type factors are sympy expressions in named symbols, and p-adic
weight substitutions run through :mod:`anticyc.arith`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

import sympy

from .arith import PadicInt, padic_root
from .errors import InputError, NoRoot, PoleError


# ---------------------------------------------------------------------------
# rational multiples of powers of pi

@dataclass(frozen=True)
class PiPowerValue:
    """q * pi^e."""

    q: Fraction
    e: int

    def __mul__(self, other: PiPowerValue) -> PiPowerValue:
        return PiPowerValue(self.q * other.q, self.e + other.e)

    def __truediv__(self, other: PiPowerValue) -> PiPowerValue:
        return PiPowerValue(self.q / other.q, self.e - other.e)

    def to_json(self) -> dict:
        return {"rational": str(self.q), "pi_exponent": self.e}


ONE = PiPowerValue(Fraction(1), 0)


def gamma_C(s: int) -> PiPowerValue:
    """2 (2 pi)^-s Gamma(s) for a positive integer s."""
    if s != int(s) or s < 1:
        raise PoleError(f"Gamma_C has a pole or non-integral argument at s={s}", argument=s)
    s = int(s)
    return PiPowerValue(Fraction(2 * math.factorial(s - 1), 2 ** s), -s)


def gamma_arguments(k0: int, k1: int, k2: int) -> list[Fraction]:
    c = Fraction(k0 + k1 + k2 - 2, 2)
    return [c, c + 2 - k1 - k2, c + 1 - k1, c + 1 - k2]


def gamma_triple(k0: int, k1: int, k2: int) -> PiPowerValue:
    """Gamma_C(c) Gamma_C(c+2-k1-k2) Gamma_C(c+1-k1) Gamma_C(c+1-k2), c = (k0+k1+k2-2)/2."""
    out = ONE
    for s in gamma_arguments(k0, k1, k2):
        if s.denominator != 1 or s < 1:
            raise PoleError(f"Gamma_C argument {s} is not a positive integer", argument=str(s))
        out = out * gamma_C(int(s))
    return out


def explicit_gamma_arguments(k1: int, k2: int, r: int) -> list[Fraction]:
    """Arguments of the four Gamma values in the completed triple L-value for
    g of weight k1 dominant, f of weight 2r and h of weight k2."""
    h = Fraction(k1 + k2, 2)
    d = Fraction(k1 - k2, 2)
    return [h + r - 1, d - r + 1, h - r, d + r]


def explicit_gamma_value(k1: int, k2: int, r: int) -> PiPowerValue:
    """prod Gamma(args) / (2^4 (2 pi)^(2 k1)), the closed form compared against."""
    num = Fraction(1)
    for s in explicit_gamma_arguments(k1, k2, r):
        if s.denominator != 1 or s < 1:
            raise PoleError(f"Gamma argument {s} is not a positive integer", argument=str(s))
        num *= math.factorial(int(s) - 1)
    return PiPowerValue(num / (16 * 2 ** (2 * k1)), -2 * k1)


def gamma_triple_comparison(k1: int, k2: int, r: int) -> dict:
    """gamma_triple with the dominant weight first against the explicit list."""
    ours = gamma_arguments(k1, 2 * r, k2)
    theirs = explicit_gamma_arguments(k1, k2, r)
    value = gamma_triple(k1, 2 * r, k2)
    closed = explicit_gamma_value(k1, k2, r)
    ratio = value / closed
    return {
        "weights": [k1, 2 * r, k2],
        "arguments_match": sorted(ours) == sorted(theirs),
        "arguments": [str(s) for s in ours],
        "pi_exponent_match": ratio.e == 0,
        "constant_ratio": str(ratio.q),
    }


# ---------------------------------------------------------------------------
# Euler-type factors

a_p, alpha, chi_p, chi_pbar, p_sym, r_sym = sympy.symbols("a_p alpha chi_p chi_pbar p r")
chi1_pbar, chi2_pbar = sympy.symbols("chi1_pbar chi2_pbar")


@dataclass
class InterpFactor:
    """A sympy expression with a rational evaluator."""

    expr: sympy.Expr
    label: str = ""

    def evaluate(self, values: Mapping) -> Fraction:
        subs = {sympy.Symbol(k) if isinstance(k, str) else k: sympy.Rational(str(v)) for k, v in values.items()}
        out = sympy.nsimplify(self.expr.subs(subs))
        if out.free_symbols:
            raise InputError(f"unassigned symbols {sorted(map(str, out.free_symbols))}")
        out = sympy.Rational(out)
        return Fraction(int(out.p), int(out.q))

    def simplify(self) -> InterpFactor:
        return InterpFactor(sympy.simplify(self.expr), self.label)

    def to_json(self) -> dict:
        return {"label": self.label, "expression": sympy.srepr(self.expr), "text": str(self.expr)}


@dataclass(frozen=True)
class Ramified:
    """Placeholder for a local epsilon-factor defined outside this package."""

    n: int
    chi_p: object

    def to_json(self) -> dict:
        return {"ramified": True, "n": self.n, "chi_p": str(self.chi_p)}


def _sym(x):
    return sympy.sympify(x) if not isinstance(x, sympy.Basic) else x


def calE_BD(alpha_v=alpha, r=r_sym, chi_at_p=chi_p, chi_at_pbar=chi_pbar, n: int = 0, p=p_sym,
            symmetric: bool = False) -> InterpFactor:
    """E_p(f, chi phi): the two-factor product for n = 0, and 1 for n > 0.

    The default keeps the asymmetric alpha^(-1), alpha^(+1) placement;
    ``symmetric`` uses alpha^(-1) in both factors.
    """
    if n < 0:
        raise InputError("conductor exponent must be non-negative")
    if n > 0:
        return InterpFactor(sympy.Integer(1), "E_p (n>0)")
    A, R, P = _sym(alpha_v), _sym(r), _sym(p)
    second = A ** -1 if symmetric else A
    expr = (1 - A ** -1 * P ** (R - 1) * _sym(chi_at_p)) * (1 - second * P ** (R - 1) * _sym(chi_at_pbar))
    return InterpFactor(expr, "E_p symmetric" if symmetric else "E_p")


def bd_prefactor(alpha_v=alpha, r=r_sym, n: int = 0, p=p_sym) -> InterpFactor:
    """p^((2r-1)n) / alpha^(2n) * Gamma(r)^2."""
    A, R, P = _sym(alpha_v), _sym(r), _sym(p)
    return InterpFactor(P ** ((2 * R - 1) * n) / A ** (2 * n) * sympy.gamma(R) ** 2, "BD prefactor")


def e_BDP(ap=a_p, chi_at_pbar=chi_pbar, r=r_sym, p=p_sym, n: int = 0, chi_at_p=chi_p):
    """(1 - a_p chi(pbar) p^-r + chi(pbar)^2 p^-1)^2 for n = 0; a marker otherwise."""
    if n < 0:
        raise InputError("conductor exponent must be non-negative")
    if n > 0:
        return Ramified(n, chi_at_p)
    A, C, R, P = _sym(ap), _sym(chi_at_pbar), _sym(r), _sym(p)
    return InterpFactor((1 - A * C * P ** -R + C ** 2 * P ** -1) ** 2, "e_p")


def katz_factor(xi_p=chi_p, xi_pbar=chi_pbar, p=p_sym) -> InterpFactor:
    """(1 - xi(p)^-1 p^-1)(1 - xi(pbar))."""
    X = _sym(xi_p)
    if X == 0:
        raise InputError("xi(p) must be invertible")
    return InterpFactor((1 - X ** -1 * _sym(p) ** -1) * (1 - _sym(xi_pbar)), "Katz")


def katz_fe_transform(infinity_type: tuple[int, int], xi_p=chi_p, xi_pbar=chi_pbar, p=p_sym) -> dict:
    """xi -> xi^(-c) N^-1: the norm character N(a) = alpha alpha-bar has type (-1,-1),
    so (k, j) -> (1 - j, 1 - k); local values transform by conjugation."""
    k, j = infinity_type
    P = _sym(p)
    return {
        "infinity_type": (1 - j, 1 - k),
        "xi_p": sympy.simplify(_sym(xi_pbar) ** -1 * P ** -1),
        "xi_pbar": sympy.simplify(_sym(xi_p) ** -1 * P ** -1),
    }


def in_katz_range(infinity_type: tuple[int, int]) -> bool:
    k, j = infinity_type
    return k > -j >= 0


def ep_triple_rhs(ap=a_p, c1=chi1_pbar, c2=chi2_pbar, r=r_sym, p=p_sym,
                  swap_square: bool = False, exponents: tuple = None) -> sympy.Expr:
    """Product of the two squared factors of the modified triple Euler factor.

    With ``swap_square`` the first factor's quadratic term carries the second
    twist's value instead of the first; ``exponents`` = (e_lin, e_sq, e_p)
    overrides the exponents of p^-r, chi^2 and p^-1 for mutation testing.
    """
    A, R, P = _sym(ap), _sym(r), _sym(p)
    e_lin, e_sq, e_p = exponents or (1, 2, 1)
    first_sq = _sym(c2) if swap_square else _sym(c1)
    f1 = (1 - A * _sym(c1) * P ** (-R * e_lin) + first_sq ** e_sq * P ** -e_p) ** 2
    f2 = (1 - A * _sym(c2) * P ** -R + _sym(c2) ** 2 * P ** -1) ** 2
    return f1 * f2


def triple_Ep_factorization_check(ap=a_p, c1=chi1_pbar, c2=chi2_pbar, r=r_sym, p=p_sym,
                                  swap_square: bool = False, exponents: tuple = None) -> bool:
    """Exact identity: triple Euler factor = e_p(chi1) e_p(chi2)."""
    lhs = ep_triple_rhs(ap, c1, c2, r, p, swap_square, exponents)
    rhs = e_BDP(ap, c1, r, p, 0).expr * e_BDP(ap, c2, r, p, 0).expr
    return sympy.simplify(sympy.expand(lhs - rhs)) == 0


# ---------------------------------------------------------------------------
# weight variables

def weight_substitution_check(p: int, k1: int, k2: int, N: int, b: int = 0, v: PadicInt | None = None) -> dict:
    """1+W1 = v^-1 (1+S1)^(1/2) (1+S2)^(1/2) and 1+W2 = (1+S1)^(1/2) (1+S2)^(-1/2)
    at S_i = v (1+p)^(k_i - 1) - 1, against (1+p)^((k1+k2-2)/2) and (1+p)^((k1-k2)/2)."""
    if p % 2 == 0:
        raise InputError("p must be odd")
    if (k1 - k2) % 2:
        raise InputError("k1 and k2 must have the same parity")
    gamma = PadicInt(1 + p, p, N)
    if v is None:
        if b != 0:
            raise NoRoot(f"(1+p) has no p^{b}-th root in Z_p; supply v")
        v = gamma
    if v ** (p ** b) != gamma:
        raise NoRoot("v^(p^b) != 1 + p")
    one_plus_S = [v * gamma ** (k - 1) for k in (k1, k2)]
    roots = [_principal_sqrt(u) for u in one_plus_S]
    W1 = v.inverse() * roots[0] * roots[1]
    W2 = roots[0] * roots[1].inverse()
    e1, e2 = (k1 + k2 - 2) // 2, (k1 - k2) // 2
    t1 = gamma ** e1
    t2 = gamma ** e2 if e2 >= 0 else gamma.inverse() ** (-e2)
    return {
        "p": p, "k1": k1, "k2": k2, "N": N, "b": b,
        "one_plus_W1": W1.value, "one_plus_W2": W2.value,
        "exponents": [e1, e2],
        "passed": W1 == t1 and W2 == t2,
    }


def _principal_sqrt(u: PadicInt) -> PadicInt:
    root = padic_root(u, 2, seed=1)
    if root * root != u:
        raise NoRoot("square root failed")
    return root


def infinity_type_of_twists(k1: int, k2: int) -> tuple[tuple[int, int], tuple[int, int]]:
    if (k1 - k2) % 2:
        raise InputError("k1 and k2 must have the same parity")
    s, d = (k1 + k2) // 2, (k1 - k2) // 2
    return (s - 1, 1 - s), (d, -d)


def kappa_ac_eval(t: int, p: int, N: int) -> tuple[PadicInt, int]:
    """kappa_ac(gamma_-^t) = (1+p)^t, with the group-like exponent t."""
    if p % 2 == 0:
        raise InputError("p must be odd")
    g = PadicInt(1 + p, p, N)
    val = g ** t if t >= 0 else g.inverse() ** (-t)
    return val, t

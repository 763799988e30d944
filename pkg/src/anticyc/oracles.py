"""Brute-force reference computations.

These deliberately avoid the package's own algorithms (composition, Smith
forms, Legendre-symbol point counts) so they can serve as independent
cross-checks.
"""

from __future__ import annotations

import math

from .iqfield import IQField, Ideal


def reduced_form_count(D: int) -> int:
    """Number of reduced primitive forms (a, b, c) with b^2 - 4ac = D < 0."""
    count = 0
    a = 1
    while 3 * a * a <= -D:
        for b in range(-a + 1, a + 1):
            if (b * b - D) % (4 * a):
                continue
            c = (b * b - D) // (4 * a)
            if c < a:
                continue
            if c == a and b < 0:
                continue
            if math.gcd(math.gcd(a, abs(b)), c) == 1:
                count += 1
        a += 1
    return count


def residue_unit_count(I: Ideal) -> int:
    """|(O/I)^x| by counting residues in the HNF box."""
    K = I.field
    count = 0
    for x in range(I.a):
        for y in range(I.c):
            b = (x, y)
            if K.ideal(b).is_coprime(I) if b != (0, 0) else I.norm == 1:
                count += 1
    return count


def euler_phi_ideal(I: Ideal) -> int:
    """N(I) prod (1 - 1/N(P)) from the factorization."""
    out = I.norm
    for P, _ in I.factor():
        out = out // P.norm * (P.norm - 1)
    return out


def units_congruent_to_one(K: IQField, I: Ideal) -> int:
    return sum(1 for u in K.units if I.contains((u[0] - 1, u[1])))


def ray_class_number(K: IQField, I: Ideal) -> int:
    """h phi(I) / [O^x : O^x_(I,1)]."""
    return K.class_number * euler_phi_ideal(I) * units_congruent_to_one(K, I) // K.w


def ring_class_number(D: int, m: int) -> int:
    """|Pic(Z + m O_K)| as the number of reduced forms of discriminant D m^2."""
    return reduced_form_count(D * m * m)


def count_points_naive(a: tuple, ell: int) -> int:
    """#E(F_ell) by testing every affine pair."""
    a1, a2, a3, a4, a6 = a
    total = 1
    for x in range(ell):
        rhs = (x ** 3 + a2 * x * x + a4 * x + a6) % ell
        for y in range(ell):
            if (y * y + a1 * x * y + a3 * y - rhs) % ell == 0:
                total += 1
    return total


def reduce_form_naive(a: int, b: int, c: int) -> tuple[int, int, int]:
    """Gauss reduction of a positive definite form by repeated normalisation and swap."""
    while True:
        if not -a < b <= a:
            k = (a - b) // (2 * a)
            b, c = b + 2 * k * a, a * k * k + b * k + c
        if a > c:
            a, b, c = c, -b, a
            continue
        if a == c and b < 0:
            b = -b
        return a, b, c


def ring_form_of_prime(K: IQField, m: int, prime: Ideal) -> tuple[int, int, int]:
    """Reduced form of discriminant D m^2 attached to prime intersected with Z + m O_K.

    ``prime`` must have degree one and norm prime to m; the lattice
    prime /\\ O_m then has oriented basis ell, m (b + omega).
    """
    ell, b = prime.a, prime.b
    if prime.c != 1 or math.gcd(ell, m) != 1:
        raise ValueError("expected a degree-one prime prime to m")
    alpha, beta = (ell, 0), (m * b, m)
    na, nb = K.norm(alpha), K.norm(beta)
    cross = K.norm((alpha[0] + beta[0], alpha[1] + beta[1])) - na - nb
    A, B, C = na // ell, cross // ell, nb // ell
    if B * B - 4 * A * C != K.disc * m * m:
        raise AssertionError("discriminant mismatch")
    return reduce_form_naive(A, B, C)

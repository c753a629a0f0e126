"""Exact integer and integer-polynomial arithmetic.

Polynomials are tuples of Python ints, constant term first; the zero
polynomial is the empty tuple.  Factorization is delegated to sympy
(Cantor-Zassenhaus mod p, Zassenhaus with Hensel lifting over Z).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import gcd, isqrt

import numpy as np
from sympy import Poly, factorint, isprime
from sympy.abc import x as _x
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_factor

IntPolynomial = tuple


def is_prime(n: int) -> bool:
    return bool(isprime(n))


@lru_cache(maxsize=16)
def primes_up_to(n: int) -> np.ndarray:
    """All primes <= n as an int64 array (simple sieve)."""
    if n < 2:
        return np.zeros(0, dtype=np.int64)
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, isqrt(n) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    return np.flatnonzero(sieve).astype(np.int64)


def factor(n: int) -> dict[int, int]:
    """Prime factorization of |n| (n != 0)."""
    if n == 0:
        raise ValueError("cannot factor 0")
    return {int(p): int(e) for p, e in factorint(abs(n)).items()}


def valuation(n: int, p: int) -> int:
    if n == 0:
        raise ValueError("valuation of 0 is infinite")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def is_squarefree(n: int) -> bool:
    if n == 0:
        return False
    n = abs(n)
    for p in (2, 3, 5, 7):
        if n % (p * p) == 0:
            return False
    # trial division covers every input the CLI accepts (|n| <= 10**12)
    if n < 10**12:
        p = 11
        while p * p <= n:
            if n % (p * p) == 0:
                return False
            if n % p == 0:
                n //= p
            p += 2
        return True
    return all(e == 1 for e in factor(n).values())


def kronecker(d: int, m: int) -> int:
    """Kronecker symbol (d/m)."""
    if m == 0:
        raise ValueError("Kronecker symbol (d/0) is not defined here")
    result = 1
    if m < 0:
        m = -m
        if d < 0:
            result = -result
    v = 0
    while m % 2 == 0:
        m //= 2
        v += 1
    if v:
        if d % 2 == 0:
            return 0
        if v % 2 and d % 8 in (3, 5):
            result = -result
    # Jacobi symbol (d/m), m odd positive
    a = d % m
    while a:
        while a % 2 == 0:
            a //= 2
            if m % 8 in (3, 5):
                result = -result
        a, m = m, a
        if a % 4 == 3 and m % 4 == 3:
            result = -result
        a %= m
    return result if m == 1 else 0


def is_fundamental_discriminant(d: int) -> bool:
    if d % 4 == 1:
        return is_squarefree(d)
    if d % 4 == 0:
        m = d // 4
        return m % 4 in (2, 3) and is_squarefree(m)
    return False


def fundamental_part(D: int) -> tuple[int, int]:
    """Write a discriminant D = d0 * f**2 with d0 fundamental; return (d0, f)."""
    if D == 0 or D % 4 not in (0, 1):
        raise ValueError(f"{D} is not a discriminant")
    f = 1
    for p, e in factor(D).items():
        f *= p ** (e // 2)
    core = D // (f * f)
    if core % 4 != 1:
        core *= 4
        f //= 2
    return core, f


# ---------------------------------------------------------------- polynomials


def poly(coeffs) -> IntPolynomial:
    c = [int(v) for v in coeffs]
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def degree(g: IntPolynomial) -> int:
    return len(g) - 1


def poly_eval(g: IntPolynomial, x):
    acc = 0
    for c in reversed(g):
        acc = acc * x + c
    return acc


def derivative(g: IntPolynomial) -> IntPolynomial:
    return poly(i * c for i, c in enumerate(g) if i)


def _det(m: list[list[int]]) -> int:
    # Bareiss fraction-free elimination
    m = [row[:] for row in m]
    n = len(m)
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for r in range(k + 1, n):
                if m[r][k]:
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def resultant(f: IntPolynomial, g: IntPolynomial) -> int:
    """Res(f, g) as the Sylvester determinant."""
    m, n = degree(f), degree(g)
    if m < 0 or n < 0:
        return 0
    if m == 0:
        return f[0] ** n
    if n == 0:
        return g[0] ** m
    size = m + n
    rows = []
    fh, gh = list(reversed(f)), list(reversed(g))
    for i in range(n):
        rows.append([0] * i + fh + [0] * (size - m - 1 - i))
    for i in range(m):
        rows.append([0] * i + gh + [0] * (size - n - 1 - i))
    return _det(rows)


def discriminant_of_polynomial(g: IntPolynomial) -> int:
    g = poly(g)
    n = degree(g)
    if n < 1:
        raise ValueError("discriminant needs a polynomial of degree >= 1")
    r = resultant(g, derivative(g))
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    q, rem = divmod(sign * r, g[-1])
    assert rem == 0
    return q


@dataclass(frozen=True)
class ModPFactorization:
    p: int
    unit: int
    factors: tuple[tuple[IntPolynomial, int], ...]

    def degrees(self) -> list[tuple[int, int]]:
        return sorted((degree(h), e) for h, e in self.factors)


def factor_mod_p(g: IntPolynomial, p: int) -> ModPFactorization:
    """Factor g into monic irreducibles over F_p."""
    coeffs = [int(c) % p for c in reversed(poly(g))]
    while coeffs and coeffs[0] == 0:
        coeffs.pop(0)
    if not coeffs:
        raise ValueError(f"polynomial vanishes mod {p}")
    lc, facs = gf_factor([ZZ(c) for c in coeffs], p, ZZ)
    out = tuple(
        (tuple(int(c) for c in reversed(h)), int(e)) for h, e in facs
    )
    return ModPFactorization(p, int(lc), out)


def factor_over_integers(g: IntPolynomial) -> list[tuple[IntPolynomial, int]]:
    """Content times primitive irreducible factors; the content (if not 1)
    is returned as a constant factor of multiplicity 1."""
    g = poly(g)
    if not g:
        raise ValueError("zero polynomial")
    P = Poly(list(reversed(g)), _x, domain=ZZ)
    content, facs = P.factor_list()
    out: list[tuple[IntPolynomial, int]] = []
    if int(content) != 1:
        out.append(((int(content),), 1))
    for h, e in facs:
        out.append((tuple(int(c) for c in reversed(h.all_coeffs())), int(e)))
    return out


def is_irreducible(g: IntPolynomial) -> bool:
    facs = [(h, e) for h, e in factor_over_integers(g) if degree(h) > 0]
    return len(facs) == 1 and facs[0][1] == 1


def poly_mul(f: IntPolynomial, g: IntPolynomial) -> IntPolynomial:
    if not f or not g:
        return ()
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        for j, b in enumerate(g):
            out[i + j] += a * b
    return poly(out)


def content(coeffs) -> int:
    g = 0
    for c in coeffs:
        g = gcd(g, int(c))
    return g

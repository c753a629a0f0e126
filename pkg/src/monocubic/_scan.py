"""Numba scans over the reduction domain.

Totally real forms are scanned through their negated Hessian (P, Q, R),
complex forms through the quadratic factor carrying the complex roots.
Coefficient bounds (with slack) for reduced forms with |disc| <= X:

    disc > 0:  a <= (2/3)^(3/2) X^(1/4),  |b| < 3a/2 + X^(1/4),
               1 <= P <= X^(1/2),  |Q| <= P
    disc < 0:  a <= (16X/27)^(1/4),  |b| <= 3a/2 + (X/3)^(1/4),
               -|b| <= c <= |b| + a (X/4a^4)^(1/3)

The bounds are certified against a naive box enumeration in the tests.
"""

from __future__ import annotations

import math

import numba as nb
import numpy as np

from ._kernels import (
    nb_canon_search,
    nb_irreducible,
    nb_is_reduced,
    nb_maximal_all,
)


@nb.njit(cache=True)
def _push(buf, n, D, a, b, c, d):
    if n == buf.shape[0]:
        nbuf = np.empty((2 * buf.shape[0], 5), dtype=np.int64)
        nbuf[:n] = buf[:n]
        buf = nbuf
    buf[n, 0] = D
    buf[n, 1] = a
    buf[n, 2] = b
    buf[n, 3] = c
    buf[n, 4] = d
    return buf, n + 1


@nb.njit(cache=True)
def _accept(a, b, c, d, D, sign, primes, gammas):
    if not nb_is_reduced(a, b, c, d, sign):
        return False
    if not nb_irreducible(a, b, c, d, sign):
        return False
    if not nb_maximal_all(a, b, c, d, D, primes):
        return False
    found, ca, cb, cc, cd = nb_canon_search(a, b, c, d, sign, gammas)
    return found and ca == a and cb == b and cc == c and cd == d


@nb.njit(cache=True)
def _isqrt(n):
    if n < 0:
        return -1
    r = np.int64(math.sqrt(float(n)))
    while r * r > n:
        r -= 1
    while (r + 1) * (r + 1) <= n:
        r += 1
    return r


@nb.njit(cache=True)
def _disc(a, b, c, d):
    return 18 * a * b * c * d - 4 * b * b * b * d + b * b * c * c - 4 * a * c * c * c - 27 * a * a * d * d


@nb.njit(cache=True)
def _fixed_d(a, b, c, target):
    """Integer d with disc(a, b, c, d) == target (at most two)."""
    A = 27 * a * a
    B1 = 18 * a * b * c - 4 * b * b * b
    C0 = b * b * c * c - 4 * a * c * c * c
    # A d^2 - B1 d - (C0 - target) = 0
    q = B1 * B1 + 4 * A * (C0 - target)
    out = np.empty(2, dtype=np.int64)
    k = 0
    if q < 0:
        return out, 0
    s = _isqrt(q)
    if s * s != q:
        return out, 0
    for sg in (1, -1):
        num = B1 + sg * s
        if num % (2 * A) == 0:
            dd = num // (2 * A)
            if k == 1 and out[0] == dd:
                continue
            out[k] = dd
            k += 1
    return out, k


@nb.njit(cache=True, nogil=True)
def scan_positive(X, a_lo, a_hi, target, primes, gammas):
    """Canonical maximal irreducible forms with 0 < disc <= X (or == target)."""
    buf = np.empty((1024, 5), dtype=np.int64)
    n = 0
    if target != 0:
        X = target
    sX = _isqrt(X)
    X4 = math.sqrt(math.sqrt(float(X)))
    amax = np.int64(0.5443310539518174 * X4) + 1
    if a_hi > amax:
        a_hi = amax
    for a in range(a_lo, a_hi + 1):
        bmax = np.int64(1.5 * a + X4) + 2
        for b in range(-bmax, bmax + 1):
            b2 = b * b
            cmin = -((sX - b2) // (3 * a))  # ceil((b2 - sX) / 3a)
            cmax = (b2 - 1) // (3 * a)
            for c in range(cmin, cmax + 1):
                P = b2 - 3 * a * c
                if P < 1:
                    continue
                if target != 0:
                    ds, k = _fixed_d(a, b, c, target)
                    for j in range(k):
                        d = ds[j]
                        if _accept(a, b, c, d, target, 1, primes, gammas):
                            buf, n = _push(buf, n, target, a, b, c, d)
                    continue
                bc = b * c
                dmin = -((P - bc) // (9 * a))  # ceil((bc - P) / 9a)
                dmax = (bc + P) // (9 * a)
                for d in range(dmin, dmax + 1):
                    R = c * c - 3 * b * d
                    if R < P:
                        continue
                    D = _disc(a, b, c, d)
                    if D <= 0 or D > X:
                        continue
                    if _accept(a, b, c, d, D, 1, primes, gammas):
                        buf, n = _push(buf, n, D, a, b, c, d)
    return buf[:n].copy()


@nb.njit(cache=True, nogil=True)
def scan_negative(X, a_lo, a_hi, target, primes, gammas):
    """Canonical maximal irreducible forms with -X <= disc < 0 (or == target)."""
    buf = np.empty((1024, 5), dtype=np.int64)
    n = 0
    if target != 0:
        X = -target
    fX = float(X)
    amax = np.int64(math.sqrt(math.sqrt(16.0 * fX / 27.0))) + 1
    if a_hi > amax:
        a_hi = amax
    T = math.sqrt(math.sqrt(fX / 3.0))
    for a in range(a_lo, a_hi + 1):
        Y2 = (fX / (4.0 * a**4)) ** (1.0 / 3.0)
        bmax = np.int64(1.5 * a + T) + 2
        A = 27 * a * a
        fA = float(A)
        for b in range(-bmax, bmax + 1):
            ab = abs(b)
            cmin = -ab - 2
            cmax = ab + np.int64(a * Y2) + 2
            dlim = np.int64((ab + a) * (Y2 + 0.25)) + 2
            for c in range(cmin, cmax + 1):
                if target != 0:
                    ds, k = _fixed_d(a, b, c, target)
                    for j in range(k):
                        d = ds[j]
                        if abs(d) > dlim:
                            continue
                        if _accept(a, b, c, d, target, -1, primes, gammas):
                            buf, n = _push(buf, n, target, a, b, c, d)
                    continue
                B1 = float(18 * a * b * c - 4 * b * b * b)
                C0 = float(b * b * c * c - 4 * a * c * c * c)
                dv = B1 / (2.0 * fA)
                Dmax = C0 + B1 * B1 / (4.0 * fA)
                if Dmax < -fX - 1.0:
                    continue
                outer = math.sqrt(max(Dmax + fX, 0.0) / fA)
                inner = math.sqrt(Dmax / fA) if Dmax > 0.0 else -1.0
                if inner < 0.0:
                    L1 = np.int64(math.floor(dv - outer)) - 1
                    H1 = np.int64(math.ceil(dv + outer)) + 1
                    L2 = H1 + 1
                    H2 = H1
                else:
                    L1 = np.int64(math.floor(dv - outer)) - 1
                    H1 = np.int64(math.ceil(dv - inner)) + 1
                    L2 = np.int64(math.floor(dv + inner)) - 1
                    H2 = np.int64(math.ceil(dv + outer)) + 1
                    if L2 <= H1:
                        H1 = H2
                        L2 = H2 + 1
                for iv in range(2):
                    lo = L1 if iv == 0 else L2
                    hi = H1 if iv == 0 else H2
                    if lo < -dlim:
                        lo = -dlim
                    if hi > dlim:
                        hi = dlim
                    for d in range(lo, hi + 1):
                        D = _disc(a, b, c, d)
                        if D >= 0 or D < -X:
                            continue
                        if _accept(a, b, c, d, D, -1, primes, gammas):
                            buf, n = _push(buf, n, D, a, b, c, d)
    return buf[:n].copy()

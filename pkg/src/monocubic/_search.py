"""Numba kernels for bounded integer searches on z^3 = f(x, y)."""

from __future__ import annotations

import math

import numba as nb
import numpy as np


@nb.njit(cache=True)
def _peval(c3, c2, c1, c0, x):
    return ((c3 * x + c2) * x + c1) * x + c0


@nb.njit(cache=True)
def _bisect(c3, c2, c1, c0, lo, hi):
    flo = _peval(c3, c2, c1, c0, lo)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        fm = _peval(c3, c2, c1, c0, mid)
        if (fm <= 0.0) == (flo <= 0.0):
            lo, flo = mid, fm
        else:
            hi = mid
        if hi - lo <= 1e-9 * (1.0 + abs(lo)):
            break
    return 0.5 * (lo + hi)


@nb.njit(cache=True)
def real_roots(c3, c2, c1, c0, out):
    """Real roots of c3 x^3 + c2 x^2 + c1 x + c0 (degree <= 3) written to out.

    Roots are located on monotone pieces between critical points, so no
    root is missed; each is accurate to well under 1/2.
    """
    if c3 == 0.0:
        if c2 == 0.0:
            if c1 == 0.0:
                return 0
            out[0] = -c0 / c1
            return 1
        disc = c1 * c1 - 4.0 * c2 * c0
        if disc < 0.0:
            return 0
        s = math.sqrt(disc)
        out[0] = (-c1 - s) / (2.0 * c2)
        out[1] = (-c1 + s) / (2.0 * c2)
        return 2
    bound = 1.0 + max(abs(c2), max(abs(c1), abs(c0))) / abs(c3)
    pts = np.empty(4)
    npts = 0
    pts[npts] = -bound
    npts += 1
    dq = 4.0 * c2 * c2 - 12.0 * c3 * c1
    if dq > 0.0:
        s = math.sqrt(dq)
        r1 = (-2.0 * c2 - s) / (6.0 * c3)
        r2 = (-2.0 * c2 + s) / (6.0 * c3)
        if r1 > r2:
            r1, r2 = r2, r1
        pts[npts] = r1
        npts += 1
        pts[npts] = r2
        npts += 1
    pts[npts] = bound
    npts += 1
    k = 0
    for i in range(npts - 1):
        lo, hi = pts[i], pts[i + 1]
        flo = _peval(c3, c2, c1, c0, lo)
        fhi = _peval(c3, c2, c1, c0, hi)
        if flo == 0.0:
            out[k] = lo
            k += 1
        elif (flo < 0.0) != (fhi < 0.0):
            out[k] = _bisect(c3, c2, c1, c0, lo, hi)
            k += 1
    return k


@nb.njit(cache=True)
def _ieval(a, b, c, d, x, y):
    return a * x * x * x + b * x * x * y + c * x * y * y + d * y * y * y


@nb.njit(cache=True)
def thue_solutions(a, b, c, d, m, B):
    """All (x, y) with |x|, |y| <= B and f(x, y) = m."""
    out = np.empty((64, 2), dtype=np.int64)
    n = 0
    roots = np.empty(5)
    for y in range(-B, B + 1):
        fy = float(y)
        c3, c2, c1 = float(a), float(b) * fy, float(c) * fy * fy
        k = real_roots(c3, c2, c1, float(d) * fy * fy * fy - m, roots)
        # a root of even multiplicity sits at a critical point
        dq = 4.0 * c2 * c2 - 12.0 * c3 * c1
        if c3 != 0.0 and dq >= 0.0:
            s = math.sqrt(dq)
            roots[k] = (-2.0 * c2 - s) / (6.0 * c3)
            roots[k + 1] = (-2.0 * c2 + s) / (6.0 * c3)
            k += 2
        elif c3 == 0.0 and c2 != 0.0:
            roots[k] = -c1 / (2.0 * c2)
            k += 1
        for j in range(k):
            r = roots[j]
            if r < -B - 3 or r > B + 3:
                continue
            x0 = np.int64(math.floor(r))
            for x in range(x0 - 1, x0 + 3):
                if x < -B or x > B:
                    continue
                if _ieval(a, b, c, d, x, y) == m:
                    dup = False
                    for q in range(n):
                        if out[q, 0] == x and out[q, 1] == y:
                            dup = True
                    if not dup:
                        if n == out.shape[0]:
                            nout = np.empty((2 * n, 2), dtype=np.int64)
                            nout[:n] = out[:n]
                            out = nout
                        out[n, 0] = x
                        out[n, 1] = y
                        n += 1
    return out[:n].copy()


@nb.njit(cache=True)
def _icbrt(v):
    """Integer cube root of v if v is a perfect cube, else a sentinel."""
    if v == 0:
        return 0, True
    s = 1
    if v < 0:
        s = -1
        v = -v
    r = np.int64(round(v ** (1.0 / 3.0)))
    for t in range(r - 1, r + 2):
        if t >= 0 and t * t * t == v:
            return s * t, True
    return 0, False


@nb.njit(cache=True)
def _gcd(a, b):
    a = abs(a)
    b = abs(b)
    while b:
        a, b = b, a % b
    return a


@nb.njit(cache=True)
def cube_points(a, b, c, d, H, limit):
    """Primitive (x, y, z) with z^3 = f(x, y), 0 <= y <= H, |x| <= H
    (x > 0 when y = 0), stopping after `limit` points."""
    out = np.empty((max(limit, 1), 3), dtype=np.int64)
    n = 0
    for y in range(0, H + 1):
        for x in range(-H, H + 1):
            if y == 0 and x <= 0:
                continue
            if _gcd(x, y) != 1:
                continue
            z, ok = _icbrt(_ieval(a, b, c, d, x, y))
            if ok:
                out[n, 0] = x
                out[n, 1] = y
                out[n, 2] = z
                n += 1
                if n >= limit:
                    return out[:n].copy()
    return out[:n].copy()

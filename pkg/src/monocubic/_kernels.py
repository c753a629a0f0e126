"""Scalar kernels shared by the pure-Python API and the numba scans.

Every function here is written in the numba-compatible subset and exists in
two flavours: the plain Python function (exact Python ints, used for large
coefficients) and an ``nb_``-prefixed jitted twin operating on int64.  Both
run the same source, so float decisions in the reduction test agree.
"""

from __future__ import annotations

import math

import numba as nb
import numpy as np

REDUCED_EPS = 1e-9


def disc4(a, b, c, d):
    return 18 * a * b * c * d - 4 * b**3 * d + b * b * c * c - 4 * a * c**3 - 27 * a * a * d * d


def act4(p, q, r, s, a, b, c, d):
    """f((x,y)g) for g = [[p, q], [r, s]] and f = (a, b, c, d)."""
    na = a * p**3 + b * p * p * q + c * p * q * q + d * q**3
    nb_ = (
        3 * a * p * p * r
        + b * (p * p * s + 2 * p * q * r)
        + c * (q * q * r + 2 * p * q * s)
        + 3 * d * q * q * s
    )
    nc = (
        3 * a * p * r * r
        + b * (2 * p * r * s + q * r * r)
        + c * (p * s * s + 2 * q * r * s)
        + 3 * d * q * s * s
    )
    nd = a * r**3 + b * r * r * s + c * r * s * s + d * s**3
    return na, nb_, nc, nd


def real_root(a, b, c, d):
    """The real root of a t^3 + b t^2 + c t + d when it has exactly one."""
    fa = float(a)
    B = b / fa
    C = c / fa
    Dd = d / fa
    # depressed cubic t = u - B/3: u^3 + pu + q
    p = C - B * B / 3.0
    q = 2.0 * B**3 / 27.0 - B * C / 3.0 + Dd
    h = q * q / 4.0 + p**3 / 27.0
    if h < 0.0:
        h = 0.0
    sq = math.sqrt(h)
    u1 = -q / 2.0 + sq
    u2 = -q / 2.0 - sq
    cu1 = math.copysign(abs(u1) ** (1.0 / 3.0), u1)
    cu2 = math.copysign(abs(u2) ** (1.0 / 3.0), u2)
    t = cu1 + cu2 - B / 3.0
    for _ in range(3):
        fv = ((fa * t + b) * t + c) * t + d
        dv = (3.0 * fa * t + 2.0 * b) * t + c
        if dv == 0.0:
            break
        step = fv / dv
        t -= step
        if abs(step) <= 1e-15 * (1.0 + abs(t)):
            break
    return t


def three_roots(a, b, c, d):
    """The three real roots of a t^3 + ... when disc > 0 (trigonometric form)."""
    fa = float(a)
    B = b / fa
    C = c / fa
    Dd = d / fa
    p = C - B * B / 3.0
    q = 2.0 * B**3 / 27.0 - B * C / 3.0 + Dd
    out = np.empty(3)
    if p >= 0.0:
        for k in range(3):
            out[k] = -B / 3.0
        return out
    m = 2.0 * math.sqrt(-p / 3.0)
    arg = 3.0 * q / (p * m)
    if arg > 1.0:
        arg = 1.0
    if arg < -1.0:
        arg = -1.0
    th = math.acos(arg) / 3.0
    for k in range(3):
        out[k] = m * math.cos(th - 2.0 * math.pi * k / 3.0) - B / 3.0
    return out


def is_reduced(a, b, c, d, sign):
    """Membership in the reduction domain.

    sign > 0: the negated Hessian (P, Q, R) is Gauss reduced, |Q| <= P <= R.
    sign < 0: the positive definite quadratic factor x^2 + Bxy + Cy^2
    (complex roots of f) satisfies |B| <= 1 <= C, up to REDUCED_EPS.
    Both require a > 0.
    """
    if a <= 0:
        return False
    if sign > 0:
        P = b * b - 3 * a * c
        Q = b * c - 9 * a * d
        R = c * c - 3 * b * d
        return abs(Q) <= P and P <= R
    t = real_root(a, b, c, d)
    Bq = b / float(a) + t
    Cq = c / float(a) + (b / float(a)) * t + t * t
    return abs(Bq) <= 1.0 + REDUCED_EPS and Cq >= 1.0 - REDUCED_EPS


def _less(a1, b1, c1, d1, a2, b2, c2, d2):
    if a1 != a2:
        return a1 < a2
    if b1 != b2:
        return b1 < b2
    if c1 != c2:
        return c1 < c2
    return d1 < d2


def canon_search(a, b, c, d, sign, gammas):
    """Lexicographic minimum over reduced forms g.f, g in the small box."""
    ba, bb, bc, bd = a, b, c, d
    found = False
    for k in range(gammas.shape[0]):
        na, nb_, nc, nd = act4(
            gammas[k, 0], gammas[k, 1], gammas[k, 2], gammas[k, 3], a, b, c, d
        )
        if not is_reduced(na, nb_, nc, nd, sign):
            continue
        if not found or _less(na, nb_, nc, nd, ba, bb, bc, bd):
            ba, bb, bc, bd = na, nb_, nc, nd
            found = True
    return found, ba, bb, bc, bd


def maximal_at(a, b, c, d, p):
    """Index-p overring test: False iff the ring of f is not maximal at p."""
    if a % p == 0 and b % p == 0 and c % p == 0 and d % p == 0:
        return False
    p2 = p * p
    if a % p2 == 0 and b % p == 0:
        return False
    am, bm, cm, dm = a % p2, b % p2, c % p2, d % p2
    for i in range(p):
        if (3 * am * i * i + 2 * bm * i + cm) % p != 0:
            continue
        v = ((am * i + bm) % p2 * i + cm) % p2
        v = (v * i + dm) % p2
        if v == 0:
            return False
    return True


def maximal_all(a, b, c, d, D, primes):
    """Maximality at every p with p^2 | D; primes must reach cbrt(|D|)."""
    m = abs(D)
    for k in range(primes.shape[0]):
        p = primes[k]
        if p * p * p > m:
            break
        if m % p != 0:
            continue
        e = 0
        while m % p == 0:
            m //= p
            e += 1
        if e >= 2 and not maximal_at(a, b, c, d, p):
            return False
    if m > 1:
        r = int(math.sqrt(float(m)))
        while r * r > m:
            r -= 1
        while (r + 1) * (r + 1) <= m:
            r += 1
        if r > 1 and r * r == m:
            if not maximal_at(a, b, c, d, r):
                return False
    return True


def _has_root_near(a, b, c, d, t):
    for v in range(1, a + 1):
        if a % v != 0:
            continue
        u0 = int(math.floor(t * v + 0.5))
        for u in range(u0 - 1, u0 + 2):
            if a * u**3 + b * u * u * v + c * u * v * v + d * v**3 == 0:
                return True
    return False


def irreducible(a, b, c, d, sign):
    """No rational root (a > 0).  Valid for nonzero discriminant."""
    if d == 0:
        return False
    if sign < 0:
        return not _has_root_near(a, b, c, d, real_root(a, b, c, d))
    rts = three_roots(a, b, c, d)
    for k in range(3):
        if _has_root_near(a, b, c, d, rts[k]):
            return False
    return True


def _bind():
    # jitted twins resolve their callees against the jitted versions
    g = globals()

    def jit_with(fn, **deps):
        src_globals = dict(fn.__globals__)
        src_globals.update(deps)
        clone = type(fn)(fn.__code__, src_globals, fn.__name__, fn.__defaults__, fn.__closure__)
        return nb.njit(cache=True)(clone)

    jr = jit_with(real_root)
    red = jit_with(is_reduced, real_root=jr)
    act = jit_with(act4)
    less = jit_with(_less)
    cs = jit_with(canon_search, act4=act, is_reduced=red, _less=less)
    mat = jit_with(maximal_at)
    mall = jit_with(maximal_all, maximal_at=mat)
    tr = jit_with(three_roots)
    hr = jit_with(_has_root_near)
    irr = jit_with(irreducible, real_root=jr, three_roots=tr, _has_root_near=hr)
    dd = jit_with(disc4)
    g.update(
        nb_real_root=jr,
        nb_is_reduced=red,
        nb_act4=act,
        nb_canon_search=cs,
        nb_maximal_at=mat,
        nb_maximal_all=mall,
        nb_irreducible=irr,
        nb_disc4=dd,
    )


_bind()


def unimodular_box(bound: int = 2) -> np.ndarray:
    rows = []
    rng = range(-bound, bound + 1)
    for p in rng:
        for q in rng:
            for r in rng:
                for s in rng:
                    if p * s - q * r in (1, -1):
                        rows.append((p, q, r, s))
    return np.array(rows, dtype=np.int64)


GAMMAS = unimodular_box(2)

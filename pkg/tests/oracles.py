"""Slow independent oracles shared by the test modules."""

from __future__ import annotations

import itertools

import numpy as np

from monocubic.forms import BinaryCubicForm, canonicalize, is_maximal
from monocubic.numth import factor_mod_p, poly


def naive_fields(X: int, sign: int, box=(6, 16, 32, 64)) -> set[tuple]:
    """Canonical forms of every field with 0 < sign*disc <= X, found by
    canonicalizing all irreducible maximal forms in a coefficient box.

    The box is about twice the reduction-theory bounds at X = 2000, and the
    canonicalization path (exact-integer reduction followed by the box
    search) never touches the scan code.
    """
    A, B, C, Dm = box
    a = np.arange(1, A + 1)[:, None, None, None]
    b = np.arange(-B, B + 1)[None, :, None, None]
    c = np.arange(-C, C + 1)[None, None, :, None]
    d = np.arange(-Dm, Dm + 1)[None, None, None, :]
    disc = 18 * a * b * c * d - 4 * b**3 * d + b * b * c * c - 4 * a * c**3 - 27 * a * a * d * d
    hit = (sign * disc > 0) & (sign * disc <= X)
    out = set()
    seen = set()
    for ia, ib, ic, id_ in zip(*np.nonzero(hit)):
        f = BinaryCubicForm(int(ia) + 1, int(ib) - B, int(ic) - C, int(id_) - Dm)
        if not f.is_irreducible():
            continue
        g = canonicalize(f)
        if g in seen:
            continue
        seen.add(g)
        if is_maximal(g):
            out.add((g.disc(), *g.coeffs))
    return out


def dedekind_maximal(g, p: int) -> bool:
    """Dedekind's criterion: is Z[x]/(g) maximal at p (g monic)?"""
    g = poly(g)
    fac = factor_mod_p(g, p)
    # gbar = prod h_i^e_i; take lifts, form prod h_i (radical) and the cofactor
    rad = (1,)
    rest = (1,)
    for h, e in fac.factors:
        rad = _mul(rad, h)
        rest = _mul(rest, _pow(h, e - 1))
    hprod = _mul(rad, rest)
    F = [(x - y) for x, y in itertools.zip_longest(g, hprod, fillvalue=0)]
    assert all(v % p == 0 for v in F)
    F = poly(v // p for v in F)
    # maximal iff gcd(F mod p, rad mod p, rest mod p) == 1
    gg = _gcd_mod(_gcd_mod(F, rad, p), rest, p)
    return len(gg) <= 1


def _mul(f, g):
    out = [0] * (len(f) + len(g) - 1)
    for i, x in enumerate(f):
        for j, y in enumerate(g):
            out[i + j] += x * y
    return tuple(out)


def _pow(f, e):
    out = (1,)
    for _ in range(e):
        out = _mul(out, f)
    return out


def _trim(f, p):
    f = [v % p for v in f]
    while f and f[-1] == 0:
        f.pop()
    return f


def _gcd_mod(f, g, p):
    f, g = _trim(f, p), _trim(g, p)
    while g:
        inv = pow(g[-1], -1, p)
        while len(f) >= len(g):
            q = f[-1] * inv % p
            s = len(f) - len(g)
            for i, v in enumerate(g):
                f[s + i] = (f[s + i] - q * v) % p
            f = _trim(f, p)
            if not f:
                break
        f, g = g, f
    return f

"""Integral binary cubic forms, GL2(Z) actions, covariants and cubic rings."""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Iterable, Sequence

import numpy as np

from . import _kernels as K
from .numth import (
    degree,
    factor,
    factor_mod_p,
    is_prime,
    poly,
    primes_up_to,
    valuation,
)


@dataclass(frozen=True, order=True)
class BinaryCubicForm:
    """a x^3 + b x^2 y + c x y^2 + d y^3."""

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        for name in "abcd":
            object.__setattr__(self, name, int(getattr(self, name)))

    @classmethod
    def parse(cls, text: str) -> "BinaryCubicForm":
        parts = [p.strip() for p in text.replace(";", ",").split(",")]
        if len(parts) != 4:
            raise ValueError(f"expected 'a,b,c,d', got {text!r}")
        return cls(*(int(p) for p in parts))

    def __str__(self) -> str:
        return f"{self.a},{self.b},{self.c},{self.d}"

    @property
    def coeffs(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)

    def __call__(self, x, y):
        return self.a * x**3 + self.b * x * x * y + self.c * x * y * y + self.d * y**3

    def __neg__(self) -> "BinaryCubicForm":
        return BinaryCubicForm(-self.a, -self.b, -self.c, -self.d)

    def scale(self, k: int) -> "BinaryCubicForm":
        return BinaryCubicForm(k * self.a, k * self.b, k * self.c, k * self.d)

    def content(self) -> int:
        return gcd(gcd(self.a, self.b), gcd(self.c, self.d))

    def is_primitive_at(self, p: int) -> bool:
        return any(v % p for v in self.coeffs)

    def disc(self) -> int:
        return disc(self)

    def dehomogenize(self) -> tuple:
        """f(x, 1) as a constant-first polynomial."""
        return poly((self.d, self.c, self.b, self.a))

    def mod(self, m: int) -> "BinaryCubicForm":
        return BinaryCubicForm(*(v % m for v in self.coeffs))

    def is_irreducible(self) -> bool:
        """Irreducible over Q (no linear factor)."""
        if self.a == 0 or self.d == 0:
            return False
        return not _has_rational_root(self)


def _divisors(n: int) -> list[int]:
    n = abs(n)
    out = [1]
    for p, e in factor(n).items():
        out = [q * p**k for q in out for k in range(e + 1)]
    return out


def _has_rational_root(f: BinaryCubicForm) -> bool:
    for v in _divisors(f.a):
        for u in _divisors(f.d):
            for s in (u, -u):
                if f(s, v) == 0:
                    return True
    return False


def disc(f: BinaryCubicForm) -> int:
    return K.disc4(f.a, f.b, f.c, f.d)


# ---------------------------------------------------------------- actions


@dataclass(frozen=True)
class UnimodularAction:
    """g = [[p, q], [r, s]] acting by f -> f((x, y) g), optionally divided by det g."""

    p: int
    q: int
    r: int
    s: int
    twisted: bool = False

    def __post_init__(self):
        if self.det not in (1, -1):
            raise ValueError(f"matrix {self.matrix} is not in GL2(Z)")

    @classmethod
    def from_matrix(cls, m: Sequence[Sequence[int]], twisted: bool = False):
        return cls(int(m[0][0]), int(m[0][1]), int(m[1][0]), int(m[1][1]), twisted)

    @property
    def det(self) -> int:
        return self.p * self.s - self.q * self.r

    @property
    def matrix(self) -> tuple[tuple[int, int], tuple[int, int]]:
        return ((self.p, self.q), (self.r, self.s))

    def __matmul__(self, other: "UnimodularAction") -> "UnimodularAction":
        return UnimodularAction(
            self.p * other.p + self.q * other.r,
            self.p * other.q + self.q * other.s,
            self.r * other.p + self.s * other.r,
            self.r * other.q + self.s * other.s,
            self.twisted,
        )

    def inverse(self) -> "UnimodularAction":
        e = self.det
        return UnimodularAction(e * self.s, -e * self.q, -e * self.r, e * self.p, self.twisted)


IDENTITY = UnimodularAction(1, 0, 0, 1)


def substitute(f: BinaryCubicForm, m: Sequence[Sequence[int]]) -> BinaryCubicForm:
    """f((x, y) m) for an arbitrary integer matrix m."""
    (p, q), (r, s) = m
    return BinaryCubicForm(*K.act4(p, q, r, s, *f.coeffs))


def act(g: UnimodularAction, f: BinaryCubicForm) -> BinaryCubicForm:
    out = BinaryCubicForm(*K.act4(g.p, g.q, g.r, g.s, *f.coeffs))
    if g.twisted and g.det == -1:
        out = -out
    return out


# ---------------------------------------------------------------- covariants


@dataclass(frozen=True)
class QuadraticForm:
    """A x^2 + B x y + C y^2 (any signature)."""

    A: int
    B: int
    C: int

    def __call__(self, x, y):
        return self.A * x * x + self.B * x * y + self.C * y * y

    def disc(self) -> int:
        return self.B * self.B - 4 * self.A * self.C


def hessian(f: BinaryCubicForm) -> QuadraticForm:
    """h = (f_xx f_yy - f_xy^2) / 4."""
    a, b, c, d = f.coeffs
    return QuadraticForm(3 * a * c - b * b, 9 * a * d - b * c, 3 * b * d - c * c)


def jacobian_covariant(f: BinaryCubicForm) -> BinaryCubicForm:
    """g = f_x h_y - f_y h_x (the cubic covariant)."""
    a, b, c, d = f.coeffs
    h = hessian(f)
    A, B, C = h.A, h.B, h.C
    # f_x = 3a x^2 + 2b xy + c y^2,  f_y = b x^2 + 2c xy + 3d y^2
    # h_x = 2A x + B y,              h_y = B x + 2C y
    fx = (3 * a, 2 * b, c)
    fy = (b, 2 * c, 3 * d)
    hx = (2 * A, B)
    hy = (B, 2 * C)

    def mul(q, l):
        return (q[0] * l[0], q[0] * l[1] + q[1] * l[0], q[1] * l[1] + q[2] * l[0], q[2] * l[1])

    u, v = mul(fx, hy), mul(fy, hx)
    return BinaryCubicForm(*(s - t for s, t in zip(u, v)))


# ---------------------------------------------------------------- reduction


def _sign(f: BinaryCubicForm) -> int:
    D = disc(f)
    if D == 0:
        raise ValueError(f"degenerate form {f} (discriminant 0)")
    return 1 if D > 0 else -1


def _reduce(f: BinaryCubicForm) -> tuple[BinaryCubicForm, UnimodularAction]:
    """Bring f into (a neighbourhood of) the reduction domain."""
    sign = _sign(f)
    g = IDENTITY
    swap = UnimodularAction(0, -1, 1, 0)
    for _ in range(10_000):
        a, b, c, d = f.coeffs
        if sign > 0:
            P, Q, R = b * b - 3 * a * c, b * c - 9 * a * d, c * c - 3 * b * d
            t = (P - Q) // (2 * P)
            if abs(Q) > P and t:
                step = UnimodularAction(1, 0, t, 1)
            elif P > R:
                step = swap
            else:
                break
        else:
            th = K.real_root(a, b, c, d)
            Bq = b / a + th
            Cq = c / a + (b / a) * th + th * th
            t = int(np.floor(-Bq / 2 + 0.5))
            if abs(Bq) > 1 + K.REDUCED_EPS and t:
                step = UnimodularAction(1, 0, t, 1)
            elif Cq < 1 - K.REDUCED_EPS:
                step = swap
            else:
                break
        f = act(step, f)
        g = step @ g
    else:
        raise RuntimeError(f"reduction of {f} did not terminate")
    if f.a < 0:
        neg = UnimodularAction(-1, 0, 0, -1)
        f, g = act(neg, f), neg @ g
    return f, g


_KERNEL_CAP = 1 << 28
_GAMMAS_EXACT = K.GAMMAS.astype(object)  # Python ints: no int64 wraparound


def _canon_search(f: BinaryCubicForm, sign: int) -> BinaryCubicForm:
    if max(abs(v) for v in f.coeffs) < _KERNEL_CAP:
        found, *m = K.nb_canon_search(*f.coeffs, sign, K.GAMMAS)
    else:
        found, *m = K.canon_search(*f.coeffs, sign, _GAMMAS_EXACT)
    if not found:
        raise RuntimeError(f"no reduced representative near {f}")
    return BinaryCubicForm(*(int(v) for v in m))


def _check_canonicalizable(f: BinaryCubicForm) -> int:
    sign = _sign(f)
    if not f.is_irreducible():
        raise ValueError(f"form {f} is reducible over Q")
    return sign


def canonicalize_with_transform(f: BinaryCubicForm) -> tuple[BinaryCubicForm, UnimodularAction]:
    """(canonical form, g) with act(g, f) == canonical form."""
    sign = _check_canonicalizable(f)
    r, g = _reduce(f)
    canon = _canon_search(r, sign)
    for row in K.GAMMAS:
        step = UnimodularAction(*(int(v) for v in row))
        if act(step, r) == canon:
            return canon, step @ g
    raise AssertionError("canonical form not reached by the search box")


def canonicalize(f: BinaryCubicForm) -> BinaryCubicForm:
    """Lexicographically least reduced representative of the GL2(Z)-orbit."""
    sign = _check_canonicalizable(f)
    r, _ = _reduce(f)
    return _canon_search(r, sign)


def equivalent(f1: BinaryCubicForm, f2: BinaryCubicForm) -> UnimodularAction | None:
    """A matrix g with act(g, f1) == f2, or None."""
    c1, g1 = canonicalize_with_transform(f1)
    c2, g2 = canonicalize_with_transform(f2)
    if c1 != c2:
        return None
    w = g2.inverse() @ g1
    assert act(w, f1) == f2
    return w


# ---------------------------------------------------------------- maximality


def is_maximal_at_p(f: BinaryCubicForm, p: int) -> bool:
    if disc(f) == 0:
        raise ValueError("maximality is only defined here for nonzero discriminant")
    return bool(K.maximal_at(f.a, f.b, f.c, f.d, p))


def nonmaximal_primes(f: BinaryCubicForm) -> list[int]:
    D = disc(f)
    if D == 0:
        raise ValueError("maximality is only defined here for nonzero discriminant")
    return [p for p, e in sorted(factor(D).items()) if e >= 2 and not is_maximal_at_p(f, p)]


def is_maximal(f: BinaryCubicForm) -> bool:
    return not nonmaximal_primes(f)


def overring_form(f: BinaryCubicForm, p: int) -> BinaryCubicForm | None:
    """The form of an overring of index p (or p^2 when p | content), if any."""
    if not f.is_primitive_at(p):
        return BinaryCubicForm(*(v // p for v in f.coeffs))
    p2 = p * p
    cosets = [((1, 0), (0, p))] + [((p, 0), (i, 1)) for i in range(p)]
    for m in cosets:
        g = substitute(f, m)
        if all(v % p2 == 0 for v in g.coeffs):
            return BinaryCubicForm(*(v // p2 for v in g.coeffs))
    return None


def maximalize(f: BinaryCubicForm) -> BinaryCubicForm:
    """Index form of the maximal order containing the ring of f."""
    D = disc(f)
    if D == 0:
        raise ValueError("degenerate form")
    for p, e in sorted(factor(D).items()):
        for _ in range(e // 2 + 1):
            g = overring_form(f, p)
            if g is None:
                break
            f = g
    assert is_maximal(f)
    return f


def index_form_of_field(g) -> BinaryCubicForm:
    """Canonical index form of O_K for K = Q[x]/(g), g monic irreducible cubic."""
    g = poly(g)
    if degree(g) != 3 or g[3] != 1:
        raise ValueError("expected a monic cubic")
    f = BinaryCubicForm(1, g[2], g[1], g[0])
    if not f.is_irreducible():
        raise ValueError(f"polynomial {g} is reducible")
    return canonicalize(maximalize(f))


def field_discriminant(g) -> int:
    return disc(index_form_of_field(g))


# ---------------------------------------------------------------- splitting


@dataclass(frozen=True)
class SplittingSymbol:
    symbol: str
    p: int
    v3: int | None = None
    galois: str | None = None

    def __str__(self) -> str:
        extra = ""
        if self.v3 is not None:
            extra = f"[v3={self.v3}" + (f",{self.galois}" if self.galois else "") + "]"
        return self.symbol + extra


def projective_factorization(f: BinaryCubicForm, p: int) -> list[tuple[int, int]]:
    """(degree, multiplicity) of the irreducible factors of f mod p in P^1."""
    if not f.is_primitive_at(p):
        raise ValueError(f"form vanishes mod {p}")
    fac = factor_mod_p(f.dehomogenize(), p)
    parts: list[tuple[int, int]] = []
    deg_affine = 0
    for h, e in fac.factors:
        parts.append((degree(h), e))
        deg_affine += degree(h) * e
    if deg_affine < 3:
        parts.append((1, 3 - deg_affine))
    return sorted(parts, key=lambda t: (t[0], -t[1]))


def splitting_type(f: BinaryCubicForm, p: int) -> SplittingSymbol:
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if not is_maximal_at_p(f, p):
        raise ValueError(f"form {f} is not maximal at {p}")
    parts = projective_factorization(f, p)
    degs = sorted(d for d, _ in parts)
    mults = sorted((e for _, e in parts), reverse=True)
    if mults[0] == 3:
        sym = "(1^3)"
    elif mults[0] == 2:
        sym = "(1^21)"
    elif degs == [1, 1, 1]:
        sym = "(111)"
    elif degs == [1, 2]:
        sym = "(12)"
    else:
        sym = "(3)"
    if p == 3 and sym == "(1^3)":
        D = disc(f)
        v = valuation(D, 3)
        gal = None
        if v == 4:
            # C3 iff the discriminant is a 3-adic square
            gal = "C3" if (D // 81) % 3 == 1 else "S3"
        return SplittingSymbol(sym, p, v, gal)
    return SplittingSymbol(sym, p)


# ---------------------------------------------------------------- cubic rings


Vec = tuple[int, int, int]


@dataclass(frozen=True)
class CubicRing:
    """Multiplication table on the basis (1, w, t):
    w^2 = ww, w t = wt, t^2 = tt, each given in coordinates."""

    ww: Vec
    wt: Vec
    tt: Vec

    def mul(self, u: Sequence, v: Sequence) -> tuple:
        u0, u1, u2 = u
        v0, v1, v2 = v
        out = [u0 * v0, u0 * v1 + u1 * v0, u0 * v2 + u2 * v0]
        for coef, prod in (
            (u1 * v1, self.ww),
            (u1 * v2 + u2 * v1, self.wt),
            (u2 * v2, self.tt),
        ):
            for k in range(3):
                out[k] += coef * prod[k]
        return tuple(out)

    def basis(self):
        return ((1, 0, 0), (0, 1, 0), (0, 0, 1))

    def mult_matrix(self, u: Sequence) -> list[list]:
        """Column k holds u * e_k."""
        cols = [self.mul(u, e) for e in self.basis()]
        return [[cols[j][i] for j in range(3)] for i in range(3)]

    def trace(self, u: Sequence):
        m = self.mult_matrix(u)
        return m[0][0] + m[1][1] + m[2][2]

    def discriminant(self) -> int:
        B = self.basis()
        t = [[self.trace(self.mul(x, y)) for y in B] for x in B]
        return _det3(t)

    def is_associative(self) -> bool:
        B = self.basis()
        return all(
            self.mul(self.mul(x, y), z) == self.mul(x, self.mul(y, z))
            for x in B
            for y in B
            for z in B
        )

    def char_poly(self, u: Sequence) -> tuple:
        """Characteristic polynomial of multiplication by u, constant first."""
        m = self.mult_matrix(u)
        tr = m[0][0] + m[1][1] + m[2][2]
        minors = (
            m[0][0] * m[1][1] - m[0][1] * m[1][0]
            + m[0][0] * m[2][2] - m[0][2] * m[2][0]
            + m[1][1] * m[2][2] - m[1][2] * m[2][1]
        )
        return (-_det3(m), minors, -tr, 1)

    def index_of(self, u: Sequence) -> int:
        """[R : Z[u]] with sign: det of (1, u, u^2) in the table basis."""
        u2 = self.mul(u, u)
        return _det3([[1, u[0], u2[0]], [0, u[1], u2[1]], [0, u[2], u2[2]]])

    def idempotents(self, bound: int = 2) -> list[tuple]:
        rng = range(-bound, bound + 1)
        out = []
        for e in ((x, y, z) for x in rng for y in rng for z in rng):
            if self.mul(e, e) == e:
                out.append(e)
        return out


def _det3(m) -> int:
    return (
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    )


def ring_from_form(f: BinaryCubicForm) -> CubicRing:
    """Delone-Faddeev: the cubic ring attached to f."""
    a, b, c, d = f.coeffs
    return CubicRing(ww=(-a * c, b, -a), wt=(-a * d, 0, 0), tt=(-b * d, d, -c))


def index_form_of_ring(R: CubicRing) -> BinaryCubicForm:
    """f(x, y) = index of Z[x w + y t] (inverse of ring_from_form on normalized tables)."""
    vals = {}
    for x, y in ((1, 0), (0, 1), (1, 1), (1, -1)):
        vals[(x, y)] = R.index_of((0, x, y))
    a, d = vals[(1, 0)], vals[(0, 1)]
    s, t = vals[(1, 1)], vals[(1, -1)]
    # s = a + b + c + d, t = a - b + c - d
    b_plus_c = s - a - d
    c_minus_b = t - a + d
    c = (b_plus_c + c_minus_b) // 2
    return -BinaryCubicForm(a, b_plus_c - c, c, d)


def random_form(rng, bound: int) -> BinaryCubicForm:
    return BinaryCubicForm(*(int(v) for v in rng.integers(-bound, bound + 1, size=4)))


def primes_for(D: int) -> np.ndarray:
    """Enough primes for the cube-root trial division in the kernels."""
    lim = int(round(abs(D) ** (1 / 3))) + 2
    return primes_up_to(max(lim, 100))


def format_forms(forms: Iterable[BinaryCubicForm]) -> list[str]:
    return [str(f) for f in forms]

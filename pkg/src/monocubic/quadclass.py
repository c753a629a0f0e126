"""Class groups of imaginary quadratic orders via reduced binary quadratic forms."""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

import numba as nb
import numpy as np

from .numth import factor, fundamental_part, is_fundamental_discriminant


def _xgcd(a, b):
    """(g, x, y) with a x + b y = g >= 0."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b != 0:
        q = a // b
        a, b = b, a - q * b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        return -a, -x0, -y0
    return a, x0, y0


def _reduce3(a, b, c):
    """Reduce a positive definite form (a > 0)."""
    while True:
        if b > a or b <= -a:
            # translate b into (-a, a]
            k = (a - b) // (2 * a)
            c = c + k * (b + a * k)
            b = b + 2 * a * k
        if a > c:
            a, b, c = c, -b, a
            continue
        if a == c and b < 0:
            b = -b
        return a, b, c


def _compose3(a1, b1, c1, a2, b2, c2):
    """Gauss composition of two primitive forms of the same discriminant."""
    if a1 > a2:
        a1, b1, c1, a2, b2, c2 = a2, b2, c2, a1, b1, c1
    s = (b1 + b2) // 2
    n = b2 - s
    if a2 % a1 == 0:
        y1 = 0
        d = a1
    else:
        d, u, v = _xgcd(a2, a1)
        y1 = u
    if s % d == 0:
        y2 = -1
        x2 = 0
        d1 = d
    else:
        d1, x2, y2 = _xgcd(s, d)
        y2 = -y2
    v1 = a1 // d1
    v2 = a2 // d1
    r = (y1 * y2 * n - x2 * c2) % v1
    b3 = b2 + 2 * v2 * r
    a3 = v1 * v2
    c3 = (c2 * d1 + r * (b2 + v2 * r)) // v1
    return _reduce3(a3, b3, c3)


def _power3(a, b, c, e, D):
    ra, rb, rc = 1, D % 2, (D % 2 - D) // 4
    while e > 0:
        if e & 1:
            ra, rb, rc = _compose3(ra, rb, rc, a, b, c)
        e >>= 1
        if e:
            a, b, c = _compose3(a, b, c, a, b, c)
    return ra, rb, rc


def _reduced_forms(D):
    """All primitive reduced forms of discriminant D < 0, as an (h, 3) array."""
    out = np.empty((16, 3), dtype=np.int64)
    n = 0
    amax = np.int64(np.sqrt(-D / 3.0)) + 1
    for a in range(1, amax + 1):
        for b in range(-a + 1, a + 1):
            if (b - D) % 2 != 0:
                continue
            num = b * b - D
            if num % (4 * a) != 0:
                continue
            c = num // (4 * a)
            if c < a or (c == a and b < 0):
                continue
            if _gcd3(a, b, c) != 1:
                continue
            if n == out.shape[0]:
                nout = np.empty((2 * n, 3), dtype=np.int64)
                nout[:n] = out[:n]
                out = nout
            out[n, 0] = a
            out[n, 1] = b
            out[n, 2] = c
            n += 1
    return out[:n].copy()


def _gcd3(a, b, c):
    x, y = abs(a), abs(b)
    while y:
        x, y = y, x % y
    y = abs(c)
    while y:
        x, y = y, x % y
    return x


def _three_torsion(D):
    """#{x in Cl(D) : x^3 = 1}."""
    forms = _reduced_forms(D)
    one_b = D % 2
    count = 0
    for i in range(forms.shape[0]):
        a, b, c = forms[i, 0], forms[i, 1], forms[i, 2]
        a2, b2, c2 = _compose3(a, b, c, a, b, c)
        a3, b3, c3 = _compose3(a2, b2, c2, a, b, c)
        if a3 == 1 and b3 == one_b:
            count += 1
    return count


def _three_torsion_many(discs):
    out = np.empty(discs.shape[0], dtype=np.int64)
    for i in range(discs.shape[0]):
        out[i] = _three_torsion(discs[i])
    return out


_jit = nb.njit(cache=True)
_nb_xgcd = _jit(_xgcd)
_nb_gcd3 = _jit(_gcd3)
_nb_reduce3 = _jit(_reduce3)


def _rebind(fn, **deps):
    g = dict(fn.__globals__)
    g.update(deps)
    return _jit(type(fn)(fn.__code__, g, fn.__name__, fn.__defaults__, fn.__closure__))


_nb_compose3 = _rebind(_compose3, _xgcd=_nb_xgcd, _reduce3=_nb_reduce3)
_nb_reduced_forms = _rebind(_reduced_forms, _gcd3=_nb_gcd3)
_nb_three_torsion = _rebind(
    _three_torsion, _reduced_forms=_nb_reduced_forms, _compose3=_nb_compose3
)
_nb_three_torsion_many = _rebind(_three_torsion_many, _three_torsion=_nb_three_torsion)

_NB_CAP = 10**12  # |D| below this keeps every intermediate well inside int64


# ---------------------------------------------------------------- public API


def _check_disc(D: int) -> None:
    if D >= 0 or D % 4 not in (0, 1):
        raise ValueError(f"{D} is not a negative discriminant")


@dataclass(frozen=True)
class BinaryQuadraticForm:
    """a x^2 + b x y + c y^2."""

    a: int
    b: int
    c: int

    @property
    def disc(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    @classmethod
    def identity(cls, D: int) -> "BinaryQuadraticForm":
        _check_disc(D)
        return cls(1, D % 2, (D % 2 - D) // 4)

    def is_primitive(self) -> bool:
        return gcd(gcd(self.a, self.b), self.c) == 1

    def is_reduced(self) -> bool:
        a, b, c = self.a, self.b, self.c
        if not (abs(b) <= a <= c):
            return False
        if (abs(b) == a or a == c) and b < 0:
            return False
        return True

    def _check(self) -> None:
        if self.disc >= 0 or self.a <= 0:
            raise ValueError(f"{self} is not positive definite")

    def reduce(self) -> "BinaryQuadraticForm":
        self._check()
        return BinaryQuadraticForm(*_reduce3(self.a, self.b, self.c))

    def compose(self, other: "BinaryQuadraticForm") -> "BinaryQuadraticForm":
        self._check()
        if other.disc != self.disc:
            raise ValueError("forms have different discriminants")
        return BinaryQuadraticForm(*_compose3(self.a, self.b, self.c, other.a, other.b, other.c))

    __mul__ = compose

    def inverse(self) -> "BinaryQuadraticForm":
        return BinaryQuadraticForm(self.a, -self.b, self.c).reduce()

    def __pow__(self, e: int) -> "BinaryQuadraticForm":
        self._check()
        f = self if e >= 0 else self.inverse()
        return BinaryQuadraticForm(*_power3(f.a, f.b, f.c, abs(e), self.disc))

    def __str__(self) -> str:
        return f"({self.a},{self.b},{self.c})"


def reduced_forms(D: int) -> list[BinaryQuadraticForm]:
    _check_disc(D)
    fn = _nb_reduced_forms if -D < _NB_CAP else _reduced_forms
    return [BinaryQuadraticForm(*map(int, r)) for r in fn(D)]


def class_number(D: int) -> int:
    return len(reduced_forms(D))


@dataclass(frozen=True)
class AbelianGroupStructure:
    """Finite abelian group given by invariant factors d1 | d2 | ... (1s dropped)."""

    invariants: tuple[int, ...]

    def __post_init__(self):
        inv = tuple(int(v) for v in self.invariants if v != 1)
        for x, y in zip(inv, inv[1:]):
            if y % x:
                raise ValueError(f"invariant factors {inv} do not form a divisor chain")
        object.__setattr__(self, "invariants", inv)

    @classmethod
    def from_cyclic_factors(cls, orders) -> "AbelianGroupStructure":
        """Normalize any product of cyclic groups to invariant factors."""
        pparts: dict[int, list[int]] = {}
        for m in orders:
            if m < 1:
                raise ValueError("cyclic orders must be positive")
            for p, e in (factor(m).items() if m > 1 else []):
                pparts.setdefault(p, []).append(p**e)
        length = max((len(v) for v in pparts.values()), default=0)
        inv = [1] * length
        for p, pw in pparts.items():
            pw.sort()
            for i, q in enumerate(reversed(pw)):
                inv[length - 1 - i] *= q
        return cls(tuple(inv))

    @property
    def order(self) -> int:
        out = 1
        for v in self.invariants:
            out *= v
        return out

    def p_rank(self, p: int) -> int:
        return sum(1 for v in self.invariants if v % p == 0)

    def __str__(self) -> str:
        if not self.invariants:
            return "trivial"
        return " x ".join(f"Z/{v}" for v in self.invariants)


def class_group(D: int) -> AbelianGroupStructure:
    """Structure of the form class group of discriminant D < 0."""
    forms = reduced_forms(D)
    h = len(forms)
    if h == 1:
        return AbelianGroupStructure(())
    cyclic: list[int] = []
    for p, e in factor(h).items():
        # N_k = #{x : x^(p^k) = 1}; the number of cyclic p-factors of order
        # >= p^k is log_p(N_k / N_{k-1})
        counts = [1]
        k = 0
        while counts[-1] < p**e:
            k += 1
            counts.append(sum(1 for f in forms if (f ** (p**k)).a == 1))
        ge = [round(np.log(counts[i] / counts[i - 1]) / np.log(p)) for i in range(1, k + 1)]
        ge.append(0)
        for i in range(k):
            cyclic += [p ** (i + 1)] * (ge[i] - ge[i + 1])
    G = AbelianGroupStructure.from_cyclic_factors(cyclic)
    assert G.order == h
    return G


def three_torsion_size(D: int) -> int:
    _check_disc(D)
    if -D < _NB_CAP:
        return int(_nb_three_torsion(D))
    return _three_torsion(D)


def _log3_exact(n: int) -> int:
    r = 0
    while n % 3 == 0:
        n //= 3
        r += 1
    if n != 1:
        raise AssertionError("3-torsion size is not a power of 3")
    return r


def three_rank(D: int) -> int:
    return _log3_exact(three_torsion_size(D))


def three_ranks(discs) -> np.ndarray:
    """Vectorized three_rank for many discriminants."""
    arr = np.asarray(discs, dtype=np.int64)
    for D in arr.tolist():
        _check_disc(D)
    sizes = _nb_three_torsion_many(arr)
    return np.array([_log3_exact(int(s)) for s in sizes], dtype=np.int64)


def count_index3_subgroups(G: AbelianGroupStructure) -> int:
    return (3 ** G.p_rank(3) - 1) // 2


def _mobius(n: int) -> int:
    fac = factor(n) if n > 1 else {}
    if any(e > 1 for e in fac.values()):
        return 0
    return -1 if len(fac) % 2 else 1


def _divisors(n: int) -> list[int]:
    out = [1]
    for p, e in (factor(n).items() if n > 1 else []):
        out = [q * p**k for q in out for k in range(e + 1)]
    return sorted(out)


def cubic_field_count_mobius(D: int) -> int:
    """Number of cubic fields of discriminant D < 0 by class field theory.

    Write D = dF f^2 with dF fundamental.  Index-3 subgroups of the ring
    class group of conductor g count the cubic fields of discriminant
    dF c^2 over all c | g; Moebius inversion isolates c = f.
    """
    if D >= 0:
        raise ValueError("only negative discriminants (imaginary quadratic resolvent)")
    dF, f = fundamental_part(D)
    if dF in (-3, -4):
        raise ValueError("resolvent fields with extra units are not handled")
    total = 0
    for g in _divisors(f):
        mu = _mobius(f // g)
        if mu:
            total += mu * (3 ** three_rank(dF * g * g) - 1) // 2
    return total


def cft_count_fields(D: int, spec, method: str = "auto") -> int:
    """Number of cubic fields of discriminant D for D in the negative family of spec.

    method: "mobius" always inverts over the divisor lattice; "shortcut"
    uses 3 * 2^t and requires Cl(Q(sqrt D))[3] = 0; "auto" takes the
    shortcut when it applies.
    """
    from .sigmasets import sigma_membership

    rec = sigma_membership(D, spec)
    if not rec.in_sigma or D >= 0:
        raise ValueError(f"{D} is not in the negative family for n = {spec.n}")
    dF, _ = fundamental_part(D)
    if method == "mobius":
        return cubic_field_count_mobius(D)
    trivial = three_rank(dF) == 0
    if method == "shortcut":
        if not trivial:
            raise ValueError("shortcut needs Cl(F)[3] = 0")
        return 3 * 2**spec.t
    if method != "auto":
        raise ValueError(f"unknown method {method!r}")
    return 3 * 2**spec.t if trivial else cubic_field_count_mobius(D)


def fundamental_negative_discriminants(limit: int) -> np.ndarray:
    return np.array(
        [d for d in range(-3, -limit - 1, -1) if is_fundamental_discriminant(d)], dtype=np.int64
    )

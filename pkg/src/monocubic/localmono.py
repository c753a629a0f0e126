"""Local classifiers: representing units and 1 over Z_p, local monogenicity,
local obstructions, and the resulting densities."""

from __future__ import annotations

import csv
import enum
import io
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import gcd

import numpy as np

from .forms import (
    BinaryCubicForm,
    disc,
    is_maximal,
    splitting_type,
)
from ._kernels import act4, maximal_at
from .numth import factor, is_prime, primes_up_to


class Reason(str, enum.Enum):
    OK = "ok"
    ALWAYS_OK = "always-ok"
    PRIMITIVE_FAIL = "primitive-fail"
    TYPE111_AT_2 = "type111-at-2"
    NONCUBE_TRIPLE_ROOT = "noncube-triple-root"
    SEVEN_SPECIAL_ORBIT = "seven-special-orbit"
    MOD9_CLASS = "mod9-class"


@dataclass(frozen=True)
class LocalVerdict:
    p: int
    verdict: bool
    reason: Reason

    def __bool__(self) -> bool:
        return self.verdict


@dataclass(frozen=True)
class LocalReport:
    """Conjunction of per-prime verdicts."""

    verdicts: tuple[LocalVerdict, ...]

    @property
    def verdict(self) -> bool:
        return all(v.verdict for v in self.verdicts)

    def __bool__(self) -> bool:
        return self.verdict

    @property
    def failing_primes(self) -> list[int]:
        return [v.p for v in self.verdicts if not v.verdict]

    @property
    def obstruction_prime(self) -> int | None:
        bad = self.failing_primes
        return bad[0] if bad else None


XY_X_PLUS_Y = (0, 1, 1, 0)


def _check_prime(p: int) -> None:
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")


def represents_unit_at_p(f: BinaryCubicForm, p: int) -> LocalVerdict:
    _check_prime(p)
    if not f.is_primitive_at(p):
        return LocalVerdict(p, False, Reason.PRIMITIVE_FAIL)
    if p == 2 and f.mod(2).coeffs == XY_X_PLUS_Y:
        return LocalVerdict(p, False, Reason.TYPE111_AT_2)
    return LocalVerdict(p, True, Reason.OK)


def is_cube_mod_p(u: int, p: int) -> bool:
    """u a nonzero cube mod p (p != 3)."""
    u %= p
    if u == 0:
        return False
    if p % 3 != 1:
        return True
    return pow(u, (p - 1) // 3, p) == 1


def triple_root_scalar(f: BinaryCubicForm, p: int) -> int | None:
    """c with f = c L^3 mod p for a linear form L, or None."""
    a, b, c, d = (v % p for v in f.coeffs)
    if a:
        inv3a = pow(3 * a, -1, p)
        t = b * inv3a % p
        if (3 * a * t * t - c) % p == 0 and (a * t**3 - d) % p == 0:
            return a
        return None
    if b == 0 and c == 0 and d:
        return d
    return None


def _unit(x: int, m: int) -> bool:
    return gcd(x, m) == 1


def _subst(f, g):
    return act4(*g, *f)


def _orbit(seeds, m: int) -> frozenset:
    mats = [g for g in product(range(m), repeat=4) if _unit(g[0] * g[3] - g[1] * g[2], m)]
    out = set()
    for f in seeds:
        for g in mats:
            out.add(tuple(v % m for v in _subst(f, g)))
    return frozenset(out)


@lru_cache(maxsize=None)
def seven_special_orbit() -> frozenset:
    """GL2(F_7)-orbit of 2xy(x+y) mod 7."""
    return _orbit([(0, 2, 2, 0)], 7)


@lru_cache(maxsize=None)
def nine_excluded_classes() -> frozenset:
    """GL2(Z/9)-orbits of the six excluded classes mod 9."""
    seeds = []
    for c in (1, 2):
        seeds += [(0, c, c, 0), (2 * c, 0, -3, 3), (2 * c, -3, 0, 3)]
    return _orbit(seeds, 9)


def represents_one_at_p(f: BinaryCubicForm, p: int) -> LocalVerdict:
    """Does f represent 1 over Z_p (equivalently -1)?"""
    _check_prime(p)
    if not f.is_primitive_at(p):
        return LocalVerdict(p, False, Reason.PRIMITIVE_FAIL)
    if p == 2:
        return represents_unit_at_p(f, 2)
    if p == 3:
        # the local test only sees f mod 9, so degenerate lifts are fine here
        if not maximal_at(*f.coeffs, 3):
            raise ValueError("the mod-9 classification needs a ring maximal at 3")
        if f.mod(9).coeffs in nine_excluded_classes():
            return LocalVerdict(p, False, Reason.MOD9_CLASS)
        return LocalVerdict(p, True, Reason.OK)
    if p % 6 == 5:
        return LocalVerdict(p, True, Reason.ALWAYS_OK)
    c = triple_root_scalar(f, p)
    if c is not None and not is_cube_mod_p(c, p):
        return LocalVerdict(p, False, Reason.NONCUBE_TRIPLE_ROOT)
    if p == 7 and f.mod(7).coeffs in seven_special_orbit():
        return LocalVerdict(p, False, Reason.SEVEN_SPECIAL_ORBIT)
    return LocalVerdict(p, True, Reason.OK)


def brute_force_represents_one(f: BinaryCubicForm, p: int) -> bool:
    """Search (x, y) mod p (mod 9 when p = 3) for a value that is a unit cube."""
    _check_prime(p)
    if p == 3:
        return any(f(x, y) % 9 in (1, 8) for x in range(9) for y in range(9))
    return any(is_cube_mod_p(f(x, y), p) for x in range(p) for y in range(p))


@dataclass
class OracleCheck:
    p: int
    checked: int
    mismatches: list

    @property
    def ok(self) -> bool:
        return not self.mismatches


def _grid_cube_oracle(forms: np.ndarray, p: int) -> np.ndarray:
    """Vectorized brute_force_represents_one for p != 3."""
    xs, ys = np.meshgrid(np.arange(p), np.arange(p), indexing="ij")
    x, y = xs.ravel(), ys.ravel()
    mons = np.stack([x**3, x * x * y, x * y * y, y**3]) % p
    cubes = np.zeros(p, dtype=bool)
    cubes[(np.arange(1, p) ** 3) % p] = True
    vals = (np.asarray(forms, dtype=np.int64) % p) @ mons % p
    return cubes[vals].any(axis=1)


def lemma_oracle_check(p: int, n_random: int = 0, seed: int = 0, bound: int = 10**6) -> OracleCheck:
    """Compare represents_one_at_p with the brute-force oracle.

    With n_random = 0 the comparison is exhaustive over coefficient
    residues (mod 4 for p = 2, mod 9 restricted to forms maximal at 3
    for p = 3, mod p otherwise); both sides depend only on those residues.
    Otherwise n_random forms with coefficients in [-bound, bound] are drawn.
    """
    _check_prime(p)
    if n_random:
        rng = np.random.default_rng(seed)
        forms = rng.integers(-bound, bound + 1, size=(n_random, 4))
    else:
        m = {2: 4, 3: 9}.get(p, p)
        forms = np.array(list(product(range(m), repeat=4)), dtype=np.int64)
        if p == 3:
            forms = forms[[maximal_at(*map(int, cf), 3) for cf in forms]]
    if p == 3:
        oracle = [brute_force_represents_one(BinaryCubicForm(*map(int, cf)), 3) for cf in forms]
    else:
        oracle = _grid_cube_oracle(forms, p).tolist()
    bad = []
    for cf, want in zip(forms.tolist(), oracle):
        got = represents_one_at_p(BinaryCubicForm(*cf), p).verdict
        if got != want:
            bad.append((tuple(cf), got, want))
    return OracleCheck(p, len(forms), bad)


# ---------------------------------------------------------------- field-level


def _require_maximal(f: BinaryCubicForm) -> None:
    if not is_maximal(f):
        raise ValueError(f"form {f} is not maximal")


def locally_monogenic(f: BinaryCubicForm) -> LocalReport:
    """O_K (x) Z_p is monogenic for all p; only (111) at 2 obstructs."""
    _require_maximal(f)
    if splitting_type(f, 2).symbol == "(111)":
        return LocalReport((LocalVerdict(2, False, Reason.TYPE111_AT_2),))
    return LocalReport((LocalVerdict(2, True, Reason.OK),))


def relevant_primes(f: BinaryCubicForm) -> list[int]:
    extra = [p for p, e in factor(disc(f)).items() if e >= 2 and p % 6 == 1 and p != 7]
    return sorted({2, 3, 7, *extra})


def no_local_obstruction(f: BinaryCubicForm) -> LocalReport:
    """f represents 1 over Z_p for every p."""
    _require_maximal(f)
    return LocalReport(tuple(represents_one_at_p(f, p) for p in relevant_primes(f)))


# ---------------------------------------------------------------- densities


def euler_factor_one(p: int) -> Fraction:
    _check_prime(p)
    if p == 2:
        return Fraction(19, 21)
    if p == 3:
        return Fraction(316, 351)
    if p == 7:
        return Fraction(965, 1026)
    if p % 6 == 1:
        return 1 - Fraction(2, 3 * (p * p + p + 1))
    return Fraction(1)


def _tree_prod(xs: list[int]) -> int:
    while len(xs) > 1:
        xs = [xs[i] * xs[i + 1] if i + 1 < len(xs) else xs[i] for i in range(0, len(xs), 2)]
    return xs[0] if xs else 1


@dataclass(frozen=True)
class DensityValue:
    prime_bound: int
    value: Fraction

    @property
    def decimal(self) -> float:
        return float(self.value)


def density_no_obstruction(P: int) -> DensityValue:
    """Product of the Euler factors over p <= P, exactly."""
    nums, dens = [], []
    for p in primes_up_to(int(P)).tolist():
        e = euler_factor_one(p)
        if e != 1:
            nums.append(e.numerator)
            dens.append(e.denominator)
    return DensityValue(int(P), Fraction(_tree_prod(nums), _tree_prod(dens)))


SPLITTING_SYMBOLS = ("(111)", "(12)", "(3)", "(1^21)", "(1^3)")


def splitting_weights(p: int) -> dict[str, tuple[float, float]]:
    """Local weight of each splitting type at p in the main and X^(5/6) terms."""
    q = p ** (-1 / 3)
    main = (1 / 6, 1 / 2, 1 / 3, 1 / p, 1 / p**2)
    sec = (
        (1 + q) ** 3 / 6,
        (1 + q) * (1 + q * q) / 2,
        (1 + q**3) / 3,
        (1 + q) ** 2 / p,
        (1 + q) / p**2,
    )
    return dict(zip(SPLITTING_SYMBOLS, zip(main, sec)))


def predicted_type_count(X: int, sign: int, p: int, symbol: str) -> float:
    """Two-term prediction for the number of fields with |disc| <= X and the
    given splitting type at p."""
    from .enumeration import expected_count, secondary_constant

    w = splitting_weights(p)
    m_tot = sum(v[0] for v in w.values())
    s_tot = sum(v[1] for v in w.values())
    m, s = w[symbol]
    return expected_count(X, sign) * m / m_tot + secondary_constant(sign) * X ** (5 / 6) * s / s_tot


# ---------------------------------------------------------------- tables


@lru_cache(maxsize=None)
def _lookup_tables():
    """Boolean 'represents 1' tables indexed by coefficients mod 2, 7, 9.

    The mod-9 table is only meaningful for forms maximal at 3 (all table
    rows are index forms of fields).
    """
    t2 = np.ones((2,) * 4, dtype=bool)
    t2[XY_X_PLUS_Y] = False
    t2[0, 0, 0, 0] = False
    t7 = np.zeros((7,) * 4, dtype=bool)
    for cf in product(range(7), repeat=4):
        if any(cf):
            t7[cf] = represents_one_at_7_fast(cf)
    t9 = np.ones((9,) * 4, dtype=bool)
    for cf in nine_excluded_classes():
        t9[cf] = False
    for cf in product(range(9), repeat=4):
        if all(v % 3 == 0 for v in cf):
            t9[cf] = False
    return t2, t7, t9


def represents_one_at_7_fast(cf) -> bool:
    f = BinaryCubicForm(*cf)
    c = triple_root_scalar(f, 7)
    if c is not None and not is_cube_mod_p(c, 7):
        return False
    return tuple(cf) not in seven_special_orbit()


def _sq_primes_1mod6(X: int) -> list[int]:
    lim = int(X**0.5) + 1
    return [p for p in primes_up_to(lim).tolist() if p % 6 == 1 and p != 7]


def classify_rows(rows: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """(locally_monogenic, obstruction_prime) for table rows (disc, a, b, c, d).

    obstruction_prime is 0 when there is none.
    """
    rows = np.asarray(rows, dtype=np.int64)
    t2, t7, t9 = _lookup_tables()
    D = rows[:, 0]
    cf = rows[:, 1:]
    m2 = tuple((cf % 2).T)
    lm = ~((cf % 2) == np.array(XY_X_PLUS_Y)).all(axis=1)
    ok2 = t2[m2]
    ok3 = t9[tuple((cf % 9).T)]
    ok7 = t7[tuple((cf % 7).T)]
    obst = np.zeros(len(rows), dtype=np.int64)
    for p, ok in ((7, ok7), (3, ok3), (2, ok2)):
        obst[~ok] = p
    if len(rows):
        X = int(np.abs(D).max())
        absD = np.abs(D)
        for p in _sq_primes_1mod6(X):
            hit = np.flatnonzero((absD % (p * p) == 0) & (obst == 0))
            for i in hit:
                f = BinaryCubicForm(*(int(v) for v in cf[i]))
                if not represents_one_at_p(f, p):
                    obst[i] = p
    return lm, obst


@dataclass(frozen=True)
class DensityReport:
    sign: int
    X: int
    count: int
    locally_monogenic: int
    no_obstruction: int

    @property
    def locally_monogenic_fraction(self) -> float:
        return self.locally_monogenic / self.count

    @property
    def no_obstruction_fraction(self) -> float:
        return self.no_obstruction / self.count


def empirical_densities(table) -> DensityReport:
    if len(table) == 0:
        raise ValueError("empty table")
    lm, obst = classify_rows(table.rows)
    return DensityReport(table.sign, table.X, len(table), int(lm.sum()), int((obst == 0).sum()))


def report_csv(table, path=None) -> str:
    lm, obst = classify_rows(table.rows)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["disc", "a", "b", "c", "d", "locally_monogenic", "obstruction_prime",
                "no_local_obstruction"])
    for r, l, o in zip(table.rows.tolist(), lm.tolist(), obst.tolist()):
        w.writerow([*r, str(l).lower(), o or "none", str(o == 0).lower()])
    text = buf.getvalue()
    if path is not None:
        with open(path, "w") as fh:
            fh.write(text)
    return text

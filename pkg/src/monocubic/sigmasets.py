"""The families Sigma_n of discriminants -27 d n^2, their class-group-filtered
subfamilies U_n, and count verification against enumeration."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field, replace
from math import prod
from typing import Callable, Iterable, Iterator

from .numth import fundamental_part, is_fundamental_discriminant, is_prime, kronecker


@dataclass(frozen=True)
class SigmaSpec:
    """n = 3 * p_1 * ... * p_t with p_1 = 2 and every p_i = 2 (mod 3)."""

    primes: tuple[int, ...] = (2,)

    def __post_init__(self):
        ps = tuple(int(p) for p in self.primes)
        object.__setattr__(self, "primes", ps)
        if ps and ps[0] != 2:
            raise ValueError("the first prime must be 2")
        if list(ps) != sorted(set(ps)):
            raise ValueError("primes must be distinct and increasing")
        for p in ps:
            if not is_prime(p) or p % 3 != 2:
                raise ValueError(f"{p} is not a prime congruent to 2 mod 3")

    @classmethod
    def from_n(cls, n: int) -> "SigmaSpec":
        if n % 3:
            raise ValueError("n must be divisible by 3")
        m, ps = n // 3, []
        p = 2
        while m > 1:
            if m % p == 0:
                ps.append(p)
                m //= p
                if m % p == 0:
                    raise ValueError("n/3 must be squarefree")
            p += 1
        return cls(tuple(ps))

    @property
    def t(self) -> int:
        return len(self.primes)

    @property
    def n(self) -> int:
        return 3 * prod(self.primes)

    @property
    def split_primes(self) -> tuple[int, ...]:
        """Primes p | n at which d must be a nonzero square."""
        return tuple(sorted({3, *self.primes}))


@dataclass(frozen=True)
class DiscRecord:
    D: int
    d: int | None
    n: int
    t: int
    in_sigma: bool
    cl3_trivial: bool | None = None
    predicted_count: int | None = None
    actual_count: int | None = None
    all_unobstructed: bool | None = None

    @property
    def sign(self) -> int:
        return 1 if self.D > 0 else -1


def _d_conditions(d: int, spec: SigmaSpec) -> bool:
    if not is_fundamental_discriminant(d):
        return False
    if kronecker(d, 7) == 1:
        return False
    return all(kronecker(d, p) == 1 for p in spec.split_primes)


def sigma_membership(D: int, spec: SigmaSpec) -> DiscRecord:
    D = int(D)
    m = 27 * spec.n**2
    if D == 0 or D % m:
        return DiscRecord(D, None, spec.n, spec.t, False)
    d = -D // m
    return DiscRecord(D, d, spec.n, spec.t, _d_conditions(d, spec))


def sigma_members(spec: SigmaSpec, X: int, sign: int) -> Iterator[DiscRecord]:
    """Members D of Sigma_n with 0 < sign * D <= X, in increasing |D|.

    d runs over a single residue class (d = 1 mod 24 when 2 | n, since
    (d/2) = 1 forces d = 1 mod 8 and (d/3) = 1 forces d = 1 mod 3).
    """
    m = 27 * spec.n**2
    dmax = X // m
    step = 24 if 2 in spec.primes else 3
    # D = -27 d n^2, so sign(D) = -sign(d); s * k = 1 (mod step) iff k = s
    s = -sign
    for k in range(s % step, dmax + 1, step):
        d = s * k
        if _d_conditions(d, spec):
            yield DiscRecord(-d * m, d, spec.n, spec.t, True)


def resolvent_disc(rec: DiscRecord) -> int:
    """Fundamental discriminant of the quadratic field whose 3-rank gates U."""
    if rec.D > 0:
        return rec.d  # Q(sqrt(-3D)) = Q(sqrt(d)), d < 0 fundamental
    return fundamental_part(rec.D)[0]


def filter_U(records: Iterable[DiscRecord], sign: int | None = None) -> list[DiscRecord]:
    """Attach cl3_trivial; returns the records (all of them) with the flag set."""
    from .quadclass import three_rank

    out = []
    for r in records:
        if not r.in_sigma:
            raise ValueError(f"{r.D} is not a Sigma member")
        if sign is not None and r.sign != sign:
            continue
        out.append(replace(r, cl3_trivial=three_rank(resolvent_disc(r)) == 0))
    return out


def predicted_count(rec: DiscRecord, spec: SigmaSpec) -> int:
    if not rec.in_sigma or rec.cl3_trivial is not True:
        raise ValueError("predictions hold only on U_n (Cl[3] trivial)")
    return 2**spec.t if rec.D > 0 else 3 * 2**spec.t


@dataclass
class VerifyReport:
    spec: SigmaSpec
    X: int
    records: list[DiscRecord] = field(default_factory=list)

    @property
    def U(self) -> list[DiscRecord]:
        return [r for r in self.records if r.cl3_trivial]

    @property
    def mismatches(self) -> list[DiscRecord]:
        return [r for r in self.U if r.actual_count != r.predicted_count]

    def sigma_count(self, sign: int) -> int:
        return sum(1 for r in self.records if r.sign == sign)

    def u_density(self, sign: int) -> float | None:
        S = [r for r in self.records if r.sign == sign]
        return sum(bool(r.cl3_trivial) for r in S) / len(S) if S else None

    def average_count(self, sign: int) -> float | None:
        S = [r.actual_count for r in self.records if r.sign == sign]
        return sum(S) / len(S) if S else None

    def expected_average(self, sign: int) -> int:
        return (2 - sign) * 2**self.spec.t

    def to_csv(self) -> str:
        return records_csv(self.records)


def verify_counts(
    spec: SigmaSpec,
    X: int,
    signs=(1, -1),
    count_fn: Callable[[int], int] | None = None,
) -> VerifyReport:
    """Actual vs predicted field counts for every Sigma member with |D| <= X."""
    if count_fn is None:
        from .enumeration import fields_with_discriminant

        def count_fn(D):
            return len(fields_with_discriminant(D))

    rep = VerifyReport(spec, X)
    for s in signs:
        for r in filter_U(sigma_members(spec, X, s)):
            pred = predicted_count(r, spec) if r.cl3_trivial else None
            rep.records.append(replace(r, predicted_count=pred, actual_count=count_fn(r.D)))
    return rep


@dataclass
class SweepReport:
    spec: SigmaSpec
    X: int
    checked: int = 0
    violations: list[tuple[int, str]] = field(default_factory=list)
    records: list[DiscRecord] = field(default_factory=list)


def no_obstruction_sweep(spec: SigmaSpec, X: int, tables: Iterable) -> SweepReport:
    """Every enumerated field with disc in Sigma_n must have no local obstruction."""
    import numpy as np

    from .forms import BinaryCubicForm
    from .localmono import no_local_obstruction

    rep = SweepReport(spec, X)
    m = 27 * spec.n**2
    for table in tables:
        rows = table.rows[np.abs(table.rows[:, 0]) <= X]
        rows = rows[rows[:, 0] % m == 0]
        by_D: dict[int, list] = {}
        for r in rows.tolist():
            by_D.setdefault(r[0], []).append(r[1:])
        for D, forms in sorted(by_D.items(), key=lambda kv: abs(kv[0])):
            rec = sigma_membership(D, spec)
            if not rec.in_sigma:
                continue
            ok = True
            for cf in forms:
                f = BinaryCubicForm(*cf)
                rep.checked += 1
                if not no_local_obstruction(f):
                    ok = False
                    rep.violations.append((D, str(f)))
            rep.records.append(replace(rec, actual_count=len(forms), all_unobstructed=ok))
    return rep


CSV_COLUMNS = [
    "D", "d", "n", "t", "in_sigma", "cl3_trivial", "predicted_count", "actual_count",
    "all_unobstructed",
]


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return str(v).lower()
    return str(v)


def records_csv(records: Iterable[DiscRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in records:
        w.writerow([_cell(getattr(r, c)) for c in CSV_COLUMNS])
    return buf.getvalue()

"""Enumeration of cubic fields as canonical maximal irreducible binary cubic forms.

Tables hold one row per field: (disc, a, b, c, d), sorted by disc and then
by form.  Tables can be cached in a small binary format and exported as CSV.
"""

from __future__ import annotations

import csv
import io
import math
import os
import re
import struct
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import _kernels as K
from ._scan import scan_negative, scan_positive
from .forms import BinaryCubicForm
from .numth import primes_up_to

CACHE_VERSION = 1
CACHE_MAGIC = b"MONOCUBF"
CACHE_ENV = "MONOCUBIC_CACHE_DIR"
_HEADER = struct.Struct("<8sIqbq")  # magic, version, X, sign, count
DISC_CAP = 2**63 - 1


class CacheError(Exception):
    pass


class CacheVersionError(CacheError):
    pass


def _sign_value(sign) -> int:
    if sign in (1, "+", "pos", "positive", "real"):
        return 1
    if sign in (-1, "-", "neg", "negative", "complex"):
        return -1
    raise ValueError(f"unknown sign {sign!r}")


def _sorted(rows: np.ndarray) -> np.ndarray:
    rows = np.asarray(rows, dtype=np.int64).reshape(-1, 5)
    order = np.lexsort((rows[:, 4], rows[:, 3], rows[:, 2], rows[:, 1], rows[:, 0]))
    return rows[order]


@dataclass
class FieldTable:
    """Cubic fields with 0 < sign*disc <= X, one canonical form each."""

    X: int
    sign: int
    rows: np.ndarray = field(repr=False)
    version: int = CACHE_VERSION

    def __post_init__(self):
        self.sign = _sign_value(self.sign)
        self.rows = _sorted(self.rows)

    def __len__(self) -> int:
        return int(self.rows.shape[0])

    def __iter__(self):
        for r in self.rows:
            yield int(r[0]), BinaryCubicForm(*(int(v) for v in r[1:]))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FieldTable)
            and self.X == other.X
            and self.sign == other.sign
            and self.version == other.version
            and np.array_equal(self.rows, other.rows)
        )

    @property
    def discs(self) -> np.ndarray:
        return self.rows[:, 0]

    @property
    def coeffs(self) -> np.ndarray:
        return self.rows[:, 1:]

    def forms(self) -> list[BinaryCubicForm]:
        return [f for _, f in self]

    def with_discriminant(self, D: int) -> list[BinaryCubicForm]:
        lo, hi = np.searchsorted(self.discs, [D, D + 1])
        return [BinaryCubicForm(*(int(v) for v in r[1:])) for r in self.rows[lo:hi]]

    def restrict(self, X: int) -> "FieldTable":
        if X > self.X:
            raise ValueError(f"table only reaches {self.X}")
        keep = np.abs(self.discs) <= X
        return FieldTable(X, self.sign, self.rows[keep])

    def count_by_disc(self) -> dict[int, int]:
        vals, counts = np.unique(self.discs, return_counts=True)
        return dict(zip(vals.tolist(), counts.tolist()))

    def to_csv(self, path=None) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["disc", "a", "b", "c", "d"])
        w.writerows(self.rows.tolist())
        text = buf.getvalue()
        if path is not None:
            Path(path).write_text(text)
        return text


# ---------------------------------------------------------------- scanning


def _primes_for(X: int) -> np.ndarray:
    return primes_up_to(max(int(round(X ** (1 / 3))) + 2, 100))


def max_leading_coefficient(X: int, sign: int) -> int:
    if sign > 0:
        return int(0.5443310539518174 * X**0.25) + 1
    return int((16.0 * X / 27.0) ** 0.25) + 1


def enumerate_fields(
    X: int, sign, shards: int = 1, cache_dir=None, use_cache: bool = True
) -> FieldTable:
    """All cubic fields with 0 < sign*disc <= X.

    With a cache directory (argument or MONOCUBIC_CACHE_DIR) an existing
    table for the same sign and a bound >= X is reused, and fresh tables
    are written back.
    """
    X = int(X)
    if X < 1:
        raise ValueError("X must be >= 1")
    if X > DISC_CAP:
        raise ValueError("X exceeds the 64-bit cap")
    sign = _sign_value(sign)
    cdir = cache_dir if cache_dir is not None else os.environ.get(CACHE_ENV)
    if use_cache and cdir:
        hit = find_cached(cdir, X, sign)
        if hit is not None:
            return hit
    table = FieldTable(X, sign, _scan(X, sign, 0, shards))
    if use_cache and cdir:
        Path(cdir).mkdir(parents=True, exist_ok=True)
        cache_write(table, Path(cdir) / cache_name(X, sign))
    return table


def _scan(X: int, sign: int, target: int, shards: int) -> np.ndarray:
    bound = abs(target) if target else X
    primes = _primes_for(bound)
    fn = scan_positive if sign > 0 else scan_negative
    amax = max_leading_coefficient(bound, sign)
    shards = max(1, min(int(shards), amax))
    # interleave leading coefficients so shards get similar work
    edges = np.unique(np.linspace(1, amax + 1, shards + 1).astype(int))
    parts = [(int(lo), int(hi) - 1) for lo, hi in zip(edges[:-1], edges[1:])]
    if len(parts) == 1:
        out = [fn(X, parts[0][0], parts[0][1], target, primes, K.GAMMAS)]
    else:
        with ThreadPoolExecutor(len(parts)) as ex:
            out = list(ex.map(lambda r: fn(X, r[0], r[1], target, primes, K.GAMMAS), parts))
    rows = np.concatenate(out) if out else np.zeros((0, 5), np.int64)
    # shards are disjoint in a and canonical forms are unique, so this is a
    # safety net rather than a real merge
    return np.unique(rows, axis=0)


def fields_with_discriminant(D: int) -> list[BinaryCubicForm]:
    """Canonical index forms of all cubic fields of discriminant exactly D."""
    D = int(D)
    if D == 0:
        raise ValueError("D must be nonzero")
    if abs(D) > DISC_CAP:
        raise ValueError("D exceeds the 64-bit cap")
    rows = _sorted(_scan(abs(D), 1 if D > 0 else -1, D, 1))
    return [BinaryCubicForm(*(int(v) for v in r[1:])) for r in rows]


# ---------------------------------------------------------------- cache


def cache_name(X: int, sign: int) -> str:
    return f"fields_{'pos' if sign > 0 else 'neg'}_{X}.bin"


_NAME_RE = re.compile(r"fields_(pos|neg)_(\d+)\.bin$")


def find_cached(cache_dir, X: int, sign: int) -> FieldTable | None:
    """Smallest cached table of the right sign covering X, restricted to X."""
    best = None
    d = Path(cache_dir)
    if not d.is_dir():
        return None
    for p in d.iterdir():
        m = _NAME_RE.match(p.name)
        if not m or (m.group(1) == "pos") != (sign > 0):
            continue
        Xc = int(m.group(2))
        if Xc >= X and (best is None or Xc < best[0]):
            best = (Xc, p)
    if best is None:
        return None
    try:
        table = cache_read(best[1])
    except CacheError:
        return None
    return table if table.X == X else table.restrict(X)


def cache_write(table: FieldTable, path) -> None:
    path = Path(path)
    tmp = path.with_suffix(path.suffix + ".tmp")
    with open(tmp, "wb") as fh:
        fh.write(_HEADER.pack(CACHE_MAGIC, table.version, table.X, table.sign, len(table)))
        fh.write(np.ascontiguousarray(table.rows, dtype="<i8").tobytes())
    os.replace(tmp, path)


def cache_read(path) -> FieldTable:
    path = Path(path)
    try:
        data = path.read_bytes()
    except OSError as e:
        raise CacheError(f"cannot read cache file {path}: {e}") from e
    if len(data) < _HEADER.size:
        raise CacheError(f"cache file {path} is truncated (no header)")
    magic, version, X, sign, count = _HEADER.unpack_from(data)
    if magic != CACHE_MAGIC:
        raise CacheError(f"{path} is not a field cache (bad magic)")
    if version != CACHE_VERSION:
        raise CacheVersionError(
            f"cache version mismatch: file has {version}, code expects {CACHE_VERSION}"
        )
    body = data[_HEADER.size :]
    if len(body) != count * 40:
        raise CacheError(
            f"cache file {path} is truncated or corrupt: expected {count} records, "
            f"found {len(body) / 40:g}"
        )
    rows = np.frombuffer(body, dtype="<i8").reshape(count, 5).astype(np.int64)
    return FieldTable(X, sign, rows, version)


# ---------------------------------------------------------------- calibration


def zeta3() -> float:
    return 1.2020569031595942


def expected_count(X: int, sign: int) -> float:
    """Main term of the Davenport-Heilbronn count."""
    return X / ((4 if _sign_value(sign) < 0 else 12) * zeta3())


def davenport_heilbronn_constant(sign: int, prime_bound: int = 10**6) -> float:
    """pi^2/24 (or /72) times prod (1 - p^-2)(1 - p^-3), as an independent check."""
    ps = primes_up_to(prime_bound).astype(float)
    prod = float(np.exp(np.sum(np.log1p(-(ps**-2.0)) + np.log1p(-(ps**-3.0)))))
    return math.pi**2 / (24 if _sign_value(sign) < 0 else 72) * prod


def secondary_constant(sign: int) -> float:
    """Coefficient of X^(5/6) in the two-term field count."""
    import mpmath

    k = 4 * mpmath.zeta(mpmath.mpf(1) / 3) / (
        5 * mpmath.gamma(mpmath.mpf(2) / 3) ** 3 * mpmath.zeta(mpmath.mpf(5) / 3)
    )
    return float(k * (mpmath.sqrt(3) if _sign_value(sign) < 0 else 1))


def two_term_count(X: int, sign: int) -> float:
    """Main term plus the X^(5/6) secondary term."""
    return expected_count(X, sign) + secondary_constant(sign) * X ** (5 / 6)

"""Curves z^3 = f(x, y), their Jacobians, local solubility, bounded Thue and
point searches, and the Hasse-principle candidate pipeline.

Everything here is evidence-grade: searches are bounded and every absence
is reported together with the bound that was searched.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from math import gcd, isqrt

import numpy as np

from ._search import cube_points, thue_solutions
from .forms import (
    BinaryCubicForm,
    disc,
    hessian,
    index_form_of_field,
    jacobian_covariant,
    ring_from_form,
)
from .localmono import locally_monogenic, no_local_obstruction
from .numth import degree, factor, factor_over_integers, valuation

DEFAULT_POINT_SEARCH_BOUND = 300


class PointAtInfinityError(ValueError):
    """The point has z = 0, where the covariant map is not given by the formula."""


# ---------------------------------------------------------------- curves


@dataclass(frozen=True)
class MordellCurve:
    """model "E^D": y^2 = 4x^3 + D, or model "E_k": y^2 = x^3 + k."""

    model: str
    param: int

    def __post_init__(self):
        if self.model not in ("E^D", "E_k"):
            raise ValueError(f"unknown model {self.model!r}")
        if self.param == 0:
            raise ValueError("singular curve (parameter 0)")

    def contains(self, x, y) -> bool:
        x, y = Fraction(x), Fraction(y)
        if self.model == "E^D":
            return y * y == 4 * x**3 + self.param
        return y * y == x**3 + self.param

    def to_short(self) -> "MordellCurve":
        """E^D -> E_{16D} via (x, y) -> (4x, 4y)."""
        if self.model == "E_k":
            return self
        return MordellCurve("E_k", 16 * self.param)

    def to_ed(self) -> "MordellCurve":
        if self.model == "E^D":
            return self
        if self.param % 16:
            raise ValueError("E_k is E^{k/16} only when 16 | k")
        return MordellCurve("E^D", self.param // 16)

    def map_point(self, x, y, target: "MordellCurve"):
        x, y = Fraction(x), Fraction(y)
        if self.model == target.model:
            return x, y
        if self.model == "E^D":
            return 4 * x, 4 * y
        return x / 4, y / 4

    def __str__(self) -> str:
        if self.model == "E^D":
            return f"y^2 = 4x^3 + {self.param}"
        return f"y^2 = x^3 + {self.param}"


@dataclass(frozen=True)
class ProjPoint:
    """[x : y : z], primitive, sign normalized (first nonzero of z, x, y positive)."""

    x: int
    y: int
    z: int

    def __post_init__(self):
        g = gcd(gcd(self.x, self.y), self.z)
        if g == 0:
            raise ValueError("[0:0:0] is not a point")
        x, y, z = self.x // g, self.y // g, self.z // g
        lead = next(v for v in (z, x, y) if v)
        if lead < 0:
            x, y, z = -x, -y, -z
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "z", z)

    def as_list(self) -> list[int]:
        return [self.x, self.y, self.z]


@dataclass(frozen=True)
class GenusOneCurve:
    """C_f: z^3 = f(x, y)."""

    f: BinaryCubicForm

    @property
    def disc(self) -> int:
        return disc(self.f)

    @property
    def is_smooth(self) -> bool:
        return self.disc != 0

    def contains(self, P: ProjPoint) -> bool:
        return P.z**3 == self.f(P.x, P.y)

    def jacobian(self) -> MordellCurve:
        return jacobian_of(self.f)


def jacobian_of(f: BinaryCubicForm) -> MordellCurve:
    D = disc(f)
    if D == 0:
        raise ValueError(f"degenerate form {f}")
    return MordellCurve("E^D", -27 * D)


def phi_eval(f: BinaryCubicForm, P: ProjPoint) -> tuple[Fraction, Fraction]:
    """(-h/z^2, g/z^3), a point on y^2 = 4x^3 - 27 disc(f)."""
    if P.z**3 != f(P.x, P.y):
        raise ValueError(f"{P} is not on z^3 = f(x, y)")
    if P.z == 0:
        raise PointAtInfinityError(f"{P} lies at infinity of the cover")
    h = hessian(f)(P.x, P.y)
    g = jacobian_covariant(f)(P.x, P.y)
    return Fraction(-h, P.z**2), Fraction(g, P.z**3)


def reducible_model_form(D: int) -> BinaryCubicForm:
    """x^2 y - (D/4) y^3, whose curve is E^D itself."""
    if D % 4:
        raise ValueError("needs D = 0 mod 4")
    return BinaryCubicForm(0, 1, 0, -D // 4)


def reducible_model_map(D: int, P: ProjPoint) -> tuple[Fraction, Fraction]:
    """Affine point of C_f (f = reducible_model_form(D), y != 0) to E^D: (z/y, 2x/y)."""
    f = reducible_model_form(D)
    if P.z**3 != f(P.x, P.y):
        raise ValueError("point not on the curve")
    if P.y == 0:
        raise PointAtInfinityError("y = 0")
    return Fraction(P.z, P.y), Fraction(2 * P.x, P.y)


# ---------------------------------------------------------------- local solubility


def hensel_precision(f: BinaryCubicForm, p: int) -> int:
    return 2 * valuation(3 * disc(f), p) + 3


def _val(n: int, p: int, cap: int) -> int:
    if n == 0:
        return cap
    v = 0
    while n % p == 0 and v < cap:
        n //= p
        v += 1
    return v


def _charts(p: int):
    # (fixed coordinate values, free coordinate indices, free coords forced = 0 mod p)
    yield {0: 1}, (1, 2), ()
    yield {1: 1}, (0, 2), (0,)
    yield {2: 1}, (0, 1), (0, 1)


def _unit_is_cube(u: int, p: int) -> bool:
    if p == 3:
        return u % 9 in (1, 8)
    if p % 3 != 1:
        return True
    return pow(u % p, (p - 1) // 3, p) == 1


def locally_soluble(f: BinaryCubicForm, p: int, k: int | None = None) -> bool:
    """C_f(Q_p) nonempty.

    A Q_p-point exists iff f(x, y) is a cube (possibly 0) in Q_p for some
    (x : y) in P^1(Q_p).  Balls t + p^j Z_p of x/y (and of y/x inside pZ_p)
    are refined until the cube class of f is constant on the ball, or
    Hensel's lemma certifies a root of f (a point with z = 0).
    """
    D = disc(f)
    if D == 0:
        raise ValueError("singular curve")
    if (3 * D) % p:
        return True  # smooth over F_p: Hasse-Weil gives a point, which lifts
    k = hensel_precision(f, p) if k is None else k
    e = 2 if p == 3 else 1
    cap = 4 * k + 20
    a, b, c, d = f.coeffs
    # (x : y) = (t : 1) with t in Z_p, or (1 : u) with u in pZ_p; seeds are
    # balls (center, depth j) meaning center + p^j Z_p
    charts = (
        (lambda t: f(t, 1), lambda t: 3 * a * t * t + 2 * b * t + c, [(t, 1) for t in range(p)]),
        (lambda u: f(1, u), lambda u: b + 2 * c * u + 3 * d * u * u, [(0, 1)]),
    )
    for g, dg, stack in charts:
        while stack:
            t, j = stack.pop()
            val = g(t)
            if val == 0:
                return True
            v = _val(val, p, cap + 10)
            if v <= j - e:
                if v % 3 == 0 and _unit_is_cube(val // p**v, p):
                    return True
                continue
            dv = _val(dg(t), p, cap + 10)
            if v > 2 * dv and dv < cap:
                return True  # a simple root of f nearby: the point (root : 1 : 0)
            if j >= cap:
                raise RuntimeError(f"local solubility at {p} undecided at depth {cap}")
            step = p**j
            stack.extend((t + i * step, j + 1) for i in range(p))
    return False


def points_exist_mod(f: BinaryCubicForm, p: int, K: int) -> bool:
    """Exhaustive oracle: a primitive solution of z^3 = f(x, y) mod p^K exists."""
    a, b, c, d = f.coeffs
    for fixed, free, forced in _charts(p):
        pts = np.array(
            [t for t in np.ndindex(p, p) if all(t[free.index(i)] == 0 for i in forced)],
            dtype=object,
        ).reshape(-1, 2)
        for j in range(1, K + 1):
            mod = p**j
            full = np.zeros((len(pts), 3), dtype=object)
            for i, v in fixed.items():
                full[:, i] = v
            full[:, free[0]] = pts[:, 0]
            full[:, free[1]] = pts[:, 1]
            x, y, z = full[:, 0], full[:, 1], full[:, 2]
            Fv = z**3 - (a * x**3 + b * x * x * y + c * x * y * y + d * y**3)
            pts = pts[(Fv % mod) == 0]
            if len(pts) == 0 or j == K:
                break
            lifts = np.array(list(np.ndindex(p, p)), dtype=object) * mod
            pts = (pts[:, None, :] + lifts[None, :, :]).reshape(-1, 2)
        if len(pts):
            return True
    return False


def bad_primes(f: BinaryCubicForm) -> list[int]:
    return sorted(factor(3 * disc(f)))


def everywhere_locally_soluble(f: BinaryCubicForm) -> bool:
    return all(locally_soluble(f, p) for p in bad_primes(f))


def locally_soluble_primes(f: BinaryCubicForm) -> list[int]:
    return [p for p in bad_primes(f) if locally_soluble(f, p)]


# ---------------------------------------------------------------- searches


def thue_search(f: BinaryCubicForm, B: int) -> list[ProjPoint]:
    """Solutions of f(x, y) = 1 with |x|, |y| <= B, as points [x : y : 1].

    Solutions of f = -1 are the negatives (x, y) -> (-x, -y) of these.
    """
    if B < 1:
        raise ValueError("B must be >= 1")
    sols = thue_solutions(*f.coeffs, 1, int(B))
    out = [ProjPoint(int(x), int(y), 1) for x, y in sols]
    assert all(f(P.x, P.y) == 1 for P in out)
    return sorted(out, key=lambda P: (abs(P.x) + abs(P.y), P.x, P.y))


def point_search(f: BinaryCubicForm, H: int, limit: int = 16) -> list[ProjPoint]:
    """Rational points of C_f with |x|, |y| <= H (naive height search)."""
    pts = cube_points(*f.coeffs, int(H), int(limit))
    return [ProjPoint(int(x), int(y), int(z)) for x, y, z in pts]


@dataclass
class MonogenicWitness:
    status: str  # "monogenic", "obstructed", "unknown"
    form: BinaryCubicForm
    searched: int
    point: ProjPoint | None = None
    alpha: tuple[int, int, int] | None = None
    min_poly: tuple | None = None
    obstruction_primes: tuple[int, ...] = ()
    reason: str = ""


def monogenic_witness(g, B: int) -> MonogenicWitness:
    """Search for alpha with O_K = Z[alpha], K = Q[x]/(g)."""
    f = index_form_of_field(g)
    lm = locally_monogenic(f)
    if not lm:
        return MonogenicWitness("obstructed", f, 0, obstruction_primes=(2,),
                                reason="(111) splitting at 2: not locally monogenic")
    nlo = no_local_obstruction(f)
    if not nlo:
        ps = tuple(nlo.failing_primes)
        where = ", ".join(f"Z_{p}" for p in ps)
        return MonogenicWitness("obstructed", f, 0, obstruction_primes=ps,
                                reason=f"index form does not represent 1 over {where}")
    sols = thue_search(f, B)
    if not sols:
        return MonogenicWitness("unknown", f, B, reason=f"no solution with |x|,|y| <= {B}")
    P = sols[0]
    R = ring_from_form(f)
    alpha = (0, P.x, P.y)
    idx = R.index_of(alpha)
    assert abs(idx) == 1, "Thue solution must generate the ring"
    return MonogenicWitness("monogenic", f, B, P, alpha, R.char_poly(alpha))


# ---------------------------------------------------------------- Selmer bookkeeping


def _is_square(n: int) -> bool:
    return n >= 0 and isqrt(n) ** 2 == n


@dataclass
class FieldAnalysis:
    form: BinaryCubicForm
    soluble_primes: list[int]
    everywhere_soluble: bool
    thue: list[ProjPoint]
    points: list[ProjPoint]
    status: str

    def as_dict(self) -> dict:
        return {
            "form": list(self.form.coeffs),
            "locally_soluble_primes": self.soluble_primes,
            "status": self.status,
        }


def analyze_curve(f: BinaryCubicForm, B: int, H: int) -> FieldAnalysis:
    primes = bad_primes(f)
    sol = [p for p in primes if locally_soluble(f, p)]
    els = len(sol) == len(primes)
    thue = thue_search(f, B) if els else []
    pts: list[ProjPoint] = []
    if not els:
        status = "obstructed"
    elif thue:
        status = "monogenic"
    else:
        pts = point_search(f, H, limit=1)
        status = "point_found" if pts else "candidate"
    return FieldAnalysis(f, sol, els, thue, pts, status)


@dataclass
class Sel3Report:
    D: int
    fields: int
    s_D: int
    m_search: int
    thue_bound: int

    @property
    def lower_bound(self) -> int:
        return 1 + 2 * self.s_D


def sel3_lower_bound(D: int, B: int = 100, forms=None) -> Sel3Report:
    """#Sel_3(E^D) >= 1 + 2 s_D, s_D = fields of disc D whose curve is ELS."""
    from .enumeration import fields_with_discriminant

    if _is_square(-27 * D):
        raise ValueError("-27D is a square; the classes need not be distinct")
    forms = fields_with_discriminant(D) if forms is None else forms
    s = m = 0
    for f in forms:
        if everywhere_locally_soluble(f):
            s += 1
            if thue_search(f, B):
                m += 1
    return Sel3Report(D, len(forms), s, m, B)


@dataclass
class CandidateRow:
    D: int
    d: int | None
    n: int
    t: int
    form: list[int]
    locally_soluble_primes: list[int]
    thue_bound: int
    point_search_bound: int
    status: str

    def as_dict(self) -> dict:
        return asdict(self)


@dataclass
class HasseReport:
    spec: object
    X: int
    B: int
    H: int
    rows: list[CandidateRow] = field(default_factory=list)
    control: CandidateRow | None = None

    @property
    def candidates(self) -> list[CandidateRow]:
        return [r for r in self.rows if r.status == "candidate"]

    def to_json(self, only_candidates: bool = True) -> str:
        rows = self.candidates if only_candidates else self.rows
        return json.dumps([r.as_dict() for r in rows], indent=1, sort_keys=False)


CONTROL_FORM = BinaryCubicForm(1, 0, 0, -21)


def _row(D, d, spec, f, B, H) -> CandidateRow:
    an = analyze_curve(f, B, H)
    return CandidateRow(D, d, spec.n, spec.t, list(f.coeffs), an.soluble_primes, B, H, an.status)


def hasse_candidates(spec, X: int, B: int, H: int = DEFAULT_POINT_SEARCH_BOUND,
                     signs=(1, -1)) -> HasseReport:
    """Fields with disc in Sigma_n, everywhere locally soluble, with no Thue
    solution up to B and no point of height <= H on C_K."""
    from .enumeration import fields_with_discriminant
    from .sigmasets import sigma_members

    rep = HasseReport(spec, X, B, H)
    for s in signs:
        for rec in sigma_members(spec, X, s):
            for f in fields_with_discriminant(rec.D):
                rep.rows.append(_row(rec.D, rec.d, spec, f, B, H))
    D0 = disc(CONTROL_FORM)
    rep.control = _row(D0, None, spec, CONTROL_FORM, B, H)
    return rep


@dataclass
class ShaEvidenceRow:
    D: int
    fields: int
    s_D: int
    m_search: int
    sel_lower_bound: int
    gap_log3: float
    flagged: bool
    statement: str


def sha3_evidence(spec, X: int, B: int, r: int, H: int = DEFAULT_POINT_SEARCH_BOUND,
                  report: HasseReport | None = None) -> list[ShaEvidenceRow]:
    """Per D: Selmer lower bound 1 + 2 s_D against 1 + 2 m_D (Thue witnesses).

    A flag never asserts a Sha bound; it states the disjunction that the
    counts force.
    """
    report = report or hasse_candidates(spec, X, B, H)
    by_D: dict[int, list[CandidateRow]] = {}
    for row in report.rows:
        by_D.setdefault(row.D, []).append(row)
    out = []
    for D, rows in by_D.items():
        s = sum(1 for row in rows if row.status != "obstructed")
        m = sum(1 for row in rows if row.status == "monogenic")
        gap = math.log(1 + 2 * s, 3) - math.log(1 + 2 * m, 3)
        flagged = gap >= r
        stmt = (
            f"#Sel_phi >= {1 + 2 * s}; found {m} monogenic classes; either the "
            f"unexplained part comes from rank (>= {gap:.2f} in log_3 units) or "
            f"dim Sha[phi] >= {gap:.2f}"
        )
        out.append(ShaEvidenceRow(D, len(rows), s, m, 1 + 2 * s, gap, flagged, stmt))
    return out


# ---------------------------------------------------------------- distinctness surrogate


def trager_norm(fK: BinaryCubicForm, fK2: BinaryCubicForm, t: int = 1) -> tuple:
    """Res_x(fK(x, 1), fK2(y - t x, 1)) as a polynomial in y (constant first)."""
    import sympy as sp

    x, y = sp.symbols("x y")
    p1 = sum(c * x ** (3 - i) for i, c in enumerate(fK.coeffs))
    u = y - t * x
    p2 = sum(c * u ** (3 - i) for i, c in enumerate(fK2.coeffs))
    R = sp.Poly(sp.resultant(p1, p2, x), y)
    return tuple(int(c) for c in reversed(R.all_coeffs()))


def stays_irreducible_over(fK: BinaryCubicForm, fK2: BinaryCubicForm) -> bool:
    """fK2(x, 1) has no root in K = Q[x]/(fK(x, 1)) (Trager norm test)."""
    from .numth import discriminant_of_polynomial

    for t in range(1, 20):
        N = trager_norm(fK, fK2, t)
        if discriminant_of_polynomial(N) != 0:
            break
    else:
        raise RuntimeError("no squarefree norm found")
    degs = [degree(h) for h, e in factor_over_integers(N) for _ in range(e) if degree(h) > 0]
    # factor degrees of fK2 over K, times 3; a root in K shows up as a cubic factor
    return degs == [9]

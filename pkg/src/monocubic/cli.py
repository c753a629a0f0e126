"""Command-line interface: ``monocubic <command> [options]``.

Human summaries go to standard output; machine-readable CSV/JSON goes to
the file named by --out. Exit codes: 0 success, 1 an internal invariant
was violated (named on stderr), 2 invalid usage.
"""

from __future__ import annotations

import argparse
import csv
import datetime as _dt
import io
import json
import sys
from pathlib import Path

DISC_CAP = 2**63 - 1


class InvariantViolation(Exception):
    """An internal consistency check failed."""


# ---------------------------------------------------------------- argument types


def _int(text: str) -> int:
    """Integers, with _ separators, 1e7 or 10^7 accepted."""
    t = text.strip().replace("_", "")
    try:
        if "^" in t:
            b, e = t.split("^")
            return int(b) ** int(e)
        if "e" in t.lower():
            m, e = t.lower().split("e")
            v = int(m) * 10 ** int(e)
            return v
        return int(t)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None


def _bound(text: str) -> int:
    v = _int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("bounds must be positive")
    if v > DISC_CAP:
        raise argparse.ArgumentTypeError("bound exceeds the 64-bit cap")
    return v


def _disc(text: str) -> int:
    v = _int(text)
    if v == 0 or abs(v) > DISC_CAP:
        raise argparse.ArgumentTypeError("discriminant must be nonzero and fit in 64 bits")
    return v


def _ints(text: str, k: int | None = None) -> tuple[int, ...]:
    try:
        vals = tuple(int(v) for v in text.replace(" ", "").split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers: {text!r}") from None
    if k is not None and len(vals) != k:
        raise argparse.ArgumentTypeError(f"expected {k} integers, got {len(vals)}")
    return vals


def _form_arg(text: str):
    from .forms import BinaryCubicForm

    return BinaryCubicForm(*_ints(text, 4))


def _poly_arg(text: str) -> tuple[int, ...]:
    """Leading coefficient first on the command line; constant first internally."""
    return tuple(reversed(_ints(text, 4)))


def _primes_arg(text: str) -> tuple[int, ...]:
    return _ints(text)


def _spec_from(args, parser):
    from .sigmasets import SigmaSpec

    try:
        if args.primes is not None:
            return SigmaSpec(args.primes)
        return SigmaSpec.from_n(args.n)
    except ValueError as e:
        parser.error(str(e))


def _signs(sign: str) -> tuple[int, ...]:
    return {"+": (1,), "-": (-1,), "both": (1, -1)}[sign]


# ---------------------------------------------------------------- output


def _stamp() -> str:
    now = _dt.datetime.now(_dt.timezone.utc).replace(microsecond=0).isoformat()
    return f"# generated {now}\n"


def _write(args, text: str, kind: str) -> None:
    if not args.out:
        return
    if kind == "csv" and args.timestamp:
        text = _stamp() + text
    Path(args.out).write_text(text)
    print(f"wrote {args.out}")


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _b(v) -> str:
    return str(bool(v)).lower()


# ---------------------------------------------------------------- commands


def cmd_enumerate(args, parser) -> int:
    from .enumeration import enumerate_fields, expected_count, two_term_count

    rows, summary = [], []
    for s in _signs(args.sign):
        t = enumerate_fields(args.X, s, shards=args.shards, cache_dir=args.cache_dir,
                             use_cache=not args.no_cache)
        main, two = expected_count(args.X, s), two_term_count(args.X, s)
        label = "totally_real" if s > 0 else "complex"
        print(f"{label}: {len(t)} fields with 0 < {'+' if s > 0 else '-'}disc <= {args.X}; "
              f"main term {main:.1f} (ratio {len(t) / main:.4f}); "
              f"two-term {two:.1f} (ratio {len(t) / two:.4f})")
        summary.append((label, len(t), round(main, 1), round(two, 1)))
        rows += t.rows.tolist()
    rows.sort(key=lambda r: (abs(r[0]), r[0], r[1:]))
    _write(args, _csv(["disc", "a", "b", "c", "d"], rows), "csv")
    if args.summary_out:
        Path(args.summary_out).write_text(
            _csv(["signature", "count", "main_term", "two_term"], summary))
    return 0


def cmd_analyze_field(args, parser) -> int:
    from .forms import (
        canonicalize, disc, index_form_of_field, is_maximal, splitting_type,
    )
    from .genusone import monogenic_witness
    from .localmono import locally_monogenic, no_local_obstruction
    from .numth import factor

    try:
        if args.poly is not None:
            g = args.poly
            f = index_form_of_field(g)
        else:
            f = args.form
            if not f.is_irreducible() or not is_maximal(f):
                parser.error("--form must be irreducible and maximal (an index form)")
            f = canonicalize(f)
            g = f.dehomogenize()
            if g[3] != 1:
                g = None
    except ValueError as e:
        parser.error(str(e))
    D = disc(f)
    primes = sorted({2, 3, *factor(D)})
    splits = {p: splitting_type(f, p) for p in primes}
    lm = locally_monogenic(f)
    nlo = no_local_obstruction(f)
    out = {
        "disc": D,
        "index_form": list(f.coeffs),
        "splitting": {str(p): str(s) for p, s in splits.items()},
        "locally_monogenic": lm.verdict,
        "locally_monogenic_failing_primes": lm.failing_primes,
        "no_local_obstruction": nlo.verdict,
        "obstruction_primes": nlo.failing_primes,
    }
    print(f"disc: {D}")
    print(f"index form: {f}")
    for p, s in splits.items():
        print(f"splitting at {p}: {s}")
    where = f" (fails at {', '.join(map(str, lm.failing_primes))})" if not lm else ""
    print(f"locally monogenic: {_b(lm.verdict)}{where}")
    where = f" (obstructed at {', '.join(map(str, nlo.failing_primes))})" if not nlo else ""
    print(f"no local obstruction: {_b(nlo.verdict)}{where}")
    if g is not None:
        w = monogenic_witness(g, args.bound)
        out["monogenic_status"] = w.status
        out["thue_bound"] = args.bound
        if w.point is not None:
            out["thue_witness"] = [w.point.x, w.point.y]
            out["generator"] = list(w.alpha)
            out["generator_min_poly"] = list(reversed(w.min_poly))
            print(f"monogenic: witness f{(w.point.x, w.point.y)} = 1, "
                  f"min poly (leading first) {list(reversed(w.min_poly))}")
        else:
            print(f"monogenic status: {w.status} ({w.reason})")
    _write(args, json.dumps(out, indent=1) + "\n", "json")
    return 0


def cmd_densities(args, parser) -> int:
    from fractions import Fraction

    from .enumeration import enumerate_fields
    from .localmono import density_no_obstruction, empirical_densities, euler_factor_one
    from .numth import primes_up_to

    if hasattr(sys, "set_int_max_str_digits"):
        sys.set_int_max_str_digits(0)  # the exact product has tens of thousands of digits
    dv = density_no_obstruction(args.primes)
    lm = Fraction(19, 21)
    print(f"locally monogenic density: {lm} = {float(lm):.6f}")
    print("Euler factors: p=2 " + str(euler_factor_one(2)) + ", p=3 " + str(euler_factor_one(3))
          + ", p=7 " + str(euler_factor_one(7)) + ", p=1 mod 6: 1 - 2/(3(p^2+p+1))")
    print(f"no-obstruction density (p <= {args.primes}): {dv.decimal:.10f}")
    num, den = dv.value.numerator, dv.value.denominator
    print(f"exact partial product ({len(str(num))}-digit numerator, {len(str(den))}-digit "
          f"denominator):")
    print(f"{num}/{den}")
    rows = [
        ("prime_bound", args.primes),
        ("locally_monogenic_density", str(lm)),
        ("locally_monogenic_decimal", f"{float(lm):.6f}"),
        ("factor_2", str(euler_factor_one(2))),
        ("factor_3", str(euler_factor_one(3))),
        ("factor_7", str(euler_factor_one(7))),
        ("no_obstruction_decimal", f"{dv.decimal:.10f}"),
        ("no_obstruction_exact", str(dv.value)),
    ]
    if args.X:
        for s in _signs(args.sign):
            r = empirical_densities(enumerate_fields(args.X, s, shards=args.shards,
                                                     cache_dir=args.cache_dir))
            label = "totally_real" if s > 0 else "complex"
            print(f"{label} (|disc| <= {args.X}, {r.count} fields): locally monogenic "
                  f"{r.locally_monogenic_fraction:.5f}, no obstruction {r.no_obstruction_fraction:.5f}")
            rows += [
                (f"{label}_count", r.count),
                (f"{label}_locally_monogenic", r.locally_monogenic),
                (f"{label}_locally_monogenic_fraction", f"{r.locally_monogenic_fraction:.5f}"),
                (f"{label}_no_obstruction", r.no_obstruction),
                (f"{label}_no_obstruction_fraction", f"{r.no_obstruction_fraction:.5f}"),
            ]
    _write(args, _csv(["quantity", "value"], rows), "csv")
    if args.curve_out:
        acc, pts = Fraction(1), []
        for p in primes_up_to(args.primes).tolist():
            e = euler_factor_one(p)
            if e != 1:
                acc *= e
                pts.append((p, f"{float(acc):.10f}"))
        Path(args.curve_out).write_text(_csv(["x", "y"], pts))
    return 0


def cmd_sigma(args, parser) -> int:
    from .sigmasets import filter_U, records_csv, sigma_members

    spec = _spec_from(args, parser)
    recs = []
    for s in _signs(args.sign):
        rs = filter_U(sigma_members(spec, args.X, s))
        u = sum(bool(r.cl3_trivial) for r in rs)
        dens = f"{u / len(rs):.4f}" if rs else "n/a"
        print(f"n={spec.n} sign {'+' if s > 0 else '-'}: {len(rs)} members with |D| <= {args.X}, "
              f"{u} in U (density {dens})")
        recs += rs
    _write(args, records_csv(recs), "csv")
    return 0


def cmd_verify_counts(args, parser) -> int:
    from .enumeration import fields_with_discriminant
    from .quadclass import cft_count_fields

    spec = _spec_from(args, parser)
    from .sigmasets import verify_counts

    rep = verify_counts(spec, args.X, _signs(args.sign))
    for s in _signs(args.sign):
        avg = rep.average_count(s)
        dens = rep.u_density(s)
        print(f"n={spec.n} sign {'+' if s > 0 else '-'}: {rep.sigma_count(s)} Sigma members, "
              f"U density {'n/a' if dens is None else f'{dens:.4f}'}, average count "
              f"{'n/a' if avg is None else f'{avg:.4f}'} (expected {rep.expected_average(s)})")
    print(f"U members checked: {len(rep.U)}; mismatches: {len(rep.mismatches)}")
    cft_bad = []
    if args.cft_sample:
        sample = [r for r in rep.U if r.D < 0][: args.cft_sample]
        for r in sample:
            if cft_count_fields(r.D, spec) != len(fields_with_discriminant(r.D)):
                cft_bad.append(r.D)
        print(f"class field theory counts checked: {len(sample)}; mismatches: {len(cft_bad)}")
    _write(args, rep.to_csv(), "csv")
    if rep.mismatches:
        raise InvariantViolation(
            "exact count on U_n: " + ", ".join(str(r.D) for r in rep.mismatches[:10]))
    if cft_bad:
        raise InvariantViolation("class field theory count: " + ", ".join(map(str, cft_bad[:10])))
    return 0


def cmd_classgroup(args, parser) -> int:
    from .numth import fundamental_part
    from .quadclass import class_group, cubic_field_count_mobius

    D = args.disc
    if D >= 0 or D % 4 not in (0, 1):
        parser.error("classgroup needs a negative discriminant D = 0, 1 mod 4")
    G = class_group(D)
    out = {"disc": D, "class_number": G.order, "invariants": list(G.invariants),
           "three_rank": G.p_rank(3)}
    print(f"Cl({D}) = {G}; h = {G.order}; 3-rank {G.p_rank(3)}")
    if fundamental_part(D)[0] not in (-3, -4):
        n = cubic_field_count_mobius(D)
        out["cubic_fields_with_disc"] = n
        print(f"cubic fields with discriminant {D}: {n}")
    _write(args, json.dumps(out, indent=1) + "\n", "json")
    return 0


def cmd_thue(args, parser) -> int:
    from ._search import thue_solutions

    f = args.form
    if f.disc() == 0:
        parser.error("the form must have nonzero discriminant")
    sols = sorted(map(tuple, thue_solutions(*f.coeffs, args.m, args.bound).tolist()))
    for x, y in sols:
        if f(x, y) != args.m:
            raise InvariantViolation(f"Thue solution ({x}, {y}) does not satisfy f = {args.m}")
    print(f"f = {f}: {len(sols)} solutions of f(x, y) = {args.m} with |x|, |y| <= {args.bound}")
    for x, y in sols:
        print(f"  ({x}, {y})")
    _write(args, _csv(["x", "y"], sols), "csv")
    return 0


def _hasse_report(args, spec):
    from .genusone import hasse_candidates

    return hasse_candidates(spec, args.X, args.bound, args.height, _signs(args.sign))


def cmd_hasse_candidates(args, parser) -> int:
    from collections import Counter

    from .forms import BinaryCubicForm
    from .genusone import everywhere_locally_soluble, thue_search

    spec = _spec_from(args, parser)
    rep = _hasse_report(args, spec)
    counts = Counter(r.status for r in rep.rows)
    print(f"n={spec.n}, |D| <= {args.X}, Thue bound {args.bound}, point search bound {args.height}")
    print(f"fields: {len(rep.rows)}; " + ", ".join(f"{k} {v}" for k, v in sorted(counts.items())))
    print(f"control {rep.control.form}: {rep.control.status}")
    for r in rep.candidates:
        f = BinaryCubicForm(*r.form)
        if not everywhere_locally_soluble(f):
            raise InvariantViolation(f"candidate {r.form} is not everywhere locally soluble")
        if thue_search(f, min(args.bound, 200)):
            raise InvariantViolation(f"candidate {r.form} has a Thue witness")
    if rep.control.status != "monogenic" or any(r.form == rep.control.form for r in rep.candidates):
        raise InvariantViolation("planted monogenic control was not recognized")
    _write(args, rep.to_json(only_candidates=not args.all) + "\n", "json")
    return 0


def cmd_sha_evidence(args, parser) -> int:
    from .genusone import sha3_evidence

    spec = _spec_from(args, parser)
    rows = sha3_evidence(spec, args.X, args.bound, args.r, args.height,
                         report=_hasse_report(args, spec))
    flagged = [r for r in rows if r.flagged]
    print(f"n={spec.n}, |D| <= {args.X}: {len(rows)} discriminants, {len(flagged)} flagged (r = {args.r})")
    for r in flagged:
        print(f"  D={r.D}: {r.statement}")
    _write(args, _csv(
        ["D", "fields", "s_D", "m_search", "sel_lower_bound", "gap_log3", "flagged", "statement"],
        [(r.D, r.fields, r.s_D, r.m_search, r.sel_lower_bound, f"{r.gap_log3:.4f}",
          _b(r.flagged), r.statement) for r in rows]), "csv")
    return 0


def cmd_selftest(args, parser) -> int:
    from .localmono import lemma_oracle_check

    failures = []
    rows = []
    for p in (2, 3, 5, 7):
        r = lemma_oracle_check(p)
        rows.append((p, "exhaustive", r.checked, len(r.mismatches)))
        failures += r.mismatches
    for p in (11, 13, 31, 37):
        r = lemma_oracle_check(p, n_random=args.samples, seed=args.seed)
        rows.append((p, "random", r.checked, len(r.mismatches)))
        failures += r.mismatches
    for p, mode, n, bad in rows:
        print(f"represents_one_at_p vs oracle, p={p} ({mode}): {n} forms, {bad} mismatches")
    _write(args, _csv(["p", "mode", "checked", "mismatches"], rows), "csv")
    if failures:
        raise InvariantViolation(f"lemma/oracle agreement: {len(failures)} mismatches, e.g. {failures[0]}")
    print("selftest passed")
    return 0


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write the CSV/JSON artifact here")
    common.add_argument("--no-timestamp", dest="timestamp", action="store_false",
                        help="omit the timestamp header line from CSV output")
    common.add_argument("--cache-dir", help="field-table cache (default: $MONOCUBIC_CACHE_DIR)")
    common.add_argument("--shards", type=_bound, default=1, help="worker threads for enumeration")

    spec = argparse.ArgumentParser(add_help=False)
    g = spec.add_mutually_exclusive_group()
    g.add_argument("--n", type=_bound, default=6, help="n = 3 p_1 ... p_t (default 6)")
    g.add_argument("--primes", type=_primes_arg, default=None, help="p_1,...,p_t, e.g. 2,5")

    sign = argparse.ArgumentParser(add_help=False)
    sign.add_argument("--sign", choices=("+", "-", "both"), default="both")

    p = argparse.ArgumentParser(prog="monocubic", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, metavar="command")

    s = sub.add_parser("enumerate", parents=[common, sign], help="enumerate cubic fields")
    s.add_argument("--X", type=_bound, required=True)
    s.add_argument("--no-cache", action="store_true")
    s.add_argument("--summary-out", help="CSV of counts against the asymptotic terms")
    s.set_defaults(func=cmd_enumerate)

    s = sub.add_parser("analyze-field", parents=[common], help="local data of one cubic field")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--poly", type=_poly_arg, help="monic cubic, leading coefficient first: 1,0,-1,-1")
    g.add_argument("--form", type=_form_arg, help="index form a,b,c,d")
    s.add_argument("--bound", type=_bound, default=100, help="Thue search bound")
    s.set_defaults(func=cmd_analyze_field)

    s = sub.add_parser("densities", parents=[common, sign], help="density products and empirical fractions")
    s.add_argument("--primes", type=_bound, default=100000, help="prime bound P")
    s.add_argument("--X", type=_bound, default=None, help="also report empirical fractions to X")
    s.add_argument("--curve-out", help="x,y CSV of the partial product against the prime")
    s.set_defaults(func=cmd_densities)

    s = sub.add_parser("sigma", parents=[common, spec, sign], help="list Sigma_n and U_n members")
    s.add_argument("--X", type=_bound, required=True)
    s.set_defaults(func=cmd_sigma)

    s = sub.add_parser("verify-counts", parents=[common, spec, sign],
                       help="exact field counts on U_n against enumeration")
    s.add_argument("--X", type=_bound, required=True)
    s.add_argument("--cft-sample", type=int, default=20, help="D checked against the class field count")
    s.set_defaults(func=cmd_verify_counts)

    s = sub.add_parser("classgroup", parents=[common], help="class group of a negative discriminant")
    s.add_argument("--disc", type=_disc, required=True)
    s.set_defaults(func=cmd_classgroup)

    s = sub.add_parser("thue", parents=[common], help="bounded Thue equation solver")
    s.add_argument("--form", type=_form_arg, required=True)
    s.add_argument("--m", type=int, default=1)
    s.add_argument("--bound", type=_bound, default=1000)
    s.set_defaults(func=cmd_thue)

    for name, fn, hlp in (
        ("hasse-candidates", cmd_hasse_candidates, "candidate Hasse principle failures"),
        ("sha-evidence", cmd_sha_evidence, "Selmer lower bounds against Thue witnesses"),
    ):
        s = sub.add_parser(name, parents=[common, spec, sign], help=hlp)
        s.add_argument("--X", type=_bound, required=True)
        s.add_argument("--bound", type=_bound, default=10000, help="Thue bound B")
        s.add_argument("--height", type=_bound, default=300, help="point search bound")
        if name == "hasse-candidates":
            s.add_argument("--all", action="store_true", help="emit every field, not just candidates")
        else:
            s.add_argument("--r", type=float, default=1.0, help="flag gaps of at least r (log_3 units)")
        s.set_defaults(func=fn)

    s = sub.add_parser("selftest", parents=[common], help="exhaustive lemma/oracle suites")
    s.add_argument("--samples", type=_bound, default=10000)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_selftest)
    return p


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, parser)
    except InvariantViolation as e:
        print(f"invariant violated: {e}", file=sys.stderr)
        return 1
    except AssertionError as e:
        print(f"invariant violated: {e or 'internal assertion'}", file=sys.stderr)
        return 1


def main(argv=None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()

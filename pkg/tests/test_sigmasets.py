import pytest

from monocubic.enumeration import enumerate_fields
from monocubic.numth import is_fundamental_discriminant, kronecker
from monocubic.sigmasets import (
    CSV_COLUMNS,
    DiscRecord,
    SigmaSpec,
    filter_U,
    no_obstruction_sweep,
    predicted_count,
    records_csv,
    resolvent_disc,
    sigma_members,
    sigma_membership,
    verify_counts,
)


def test_spec_validation():
    assert SigmaSpec((2, 5)).n == 30 and SigmaSpec((2, 5)).t == 2
    assert SigmaSpec.from_n(6) == SigmaSpec((2,))
    assert SigmaSpec.from_n(30).split_primes == (2, 3, 5)
    for bad in [(5,), (2, 7), (2, 2), (5, 2), (2, 4)]:
        with pytest.raises(ValueError):
            SigmaSpec(bad)
    for n in (7, 12, 3 * 4):
        with pytest.raises(ValueError):
            SigmaSpec.from_n(n)


def brute_members(spec, X, sign):
    m = 27 * spec.n**2
    out = []
    for k in range(1, X // m + 1):
        D = sign * k * m
        d = -D // m
        if (is_fundamental_discriminant(d) and kronecker(d, 7) != 1
                and all(kronecker(d, p) == 1 for p in (3, *spec.primes))):
            out.append(D)
    return out


@pytest.mark.parametrize("primes", [(2,), (2, 5), ()])
@pytest.mark.parametrize("sign", [1, -1])
def test_members_match_brute_force(primes, sign):
    spec = SigmaSpec(primes)
    X = 3 * 10**6
    got = [r.D for r in sigma_members(spec, X, sign)]
    assert got == brute_members(spec, X, sign)
    assert all(sigma_membership(D, spec).in_sigma for D in got)


def test_membership_rejects():
    spec = SigmaSpec((2,))
    assert not sigma_membership(-23, spec).in_sigma
    assert sigma_membership(-23, spec).d is None
    # right shape, but d = 5 is not 1 mod 8, so (d/2) != 1
    assert not sigma_membership(-27 * 36 * 5, spec).in_sigma


def test_resolvent_discriminant():
    r = DiscRecord(D=22356, d=-23, n=6, t=1, in_sigma=True)
    assert resolvent_disc(r) == -23
    r = DiscRecord(D=-27 * 36 * 73, d=73, n=6, t=1, in_sigma=True)
    assert resolvent_disc(r) == -219  # Q(sqrt D) = Q(sqrt(-3 * 73))


def test_filter_and_prediction():
    spec = SigmaSpec((2,))
    recs = filter_U(sigma_members(spec, 10**6, -1))
    assert all(r.cl3_trivial is not None for r in recs)
    u = [r for r in recs if r.cl3_trivial]
    assert predicted_count(u[0], spec) == 6
    not_u = [r for r in recs if not r.cl3_trivial]
    if not_u:
        with pytest.raises(ValueError):
            predicted_count(not_u[0], spec)
    with pytest.raises(ValueError):
        filter_U([sigma_membership(-23, spec)])


def test_verify_counts_small():
    rep = verify_counts(SigmaSpec((2,)), 2 * 10**6)
    assert rep.U and rep.mismatches == []
    assert rep.expected_average(1) == 2 and rep.expected_average(-1) == 6
    assert rep.to_csv().splitlines()[0] == ",".join(CSV_COLUMNS)


def test_verify_counts_flags_mismatches():
    rep = verify_counts(SigmaSpec((2,)), 10**6, count_fn=lambda D: 0)
    assert len(rep.mismatches) == len(rep.U) > 0


def test_no_obstruction_sweep_small():
    tables = [enumerate_fields(2 * 10**6, s, use_cache=False) for s in (1, -1)]
    rep = no_obstruction_sweep(SigmaSpec((2,)), 2 * 10**6, tables)
    assert rep.checked > 0 and rep.violations == []
    assert all(r.all_unobstructed for r in rep.records)


def test_records_csv_formatting():
    r = DiscRecord(D=-1, d=None, n=6, t=1, in_sigma=False, cl3_trivial=True)
    line = records_csv([r]).splitlines()[1]
    assert line == "-1,,6,1,false,true,,,"

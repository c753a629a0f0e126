import json

import pytest

from monocubic.cli import main, run


def test_densities(capsys):
    assert run(["densities", "--primes", "100000"]) == 0
    out = capsys.readouterr().out
    assert "0.7599" in out and "19/21" in out and "316/351" in out and "965/1026" in out
    # the exact partial product is printed in full
    assert any(line.count("/") == 1 and len(line) > 10000 for line in out.splitlines())


def test_analyze_field_examples(capsys, tmp_path):
    out_json = tmp_path / "a.json"
    assert run(["analyze-field", "--poly", "1,0,-1,-1", "--out", str(out_json)]) == 0
    out = capsys.readouterr().out
    assert "disc: -23" in out
    assert "locally monogenic: true" in out and "no local obstruction: true" in out
    data = json.loads(out_json.read_text())
    assert data["disc"] == -23 and data["locally_monogenic"] and data["no_local_obstruction"]
    assert run(["analyze-field", "--poly", "1,-1,-2,-8"]) == 0
    out = capsys.readouterr().out
    assert "splitting at 2: (111)" in out
    assert "locally monogenic: false (fails at 2)" in out


def test_analyze_field_by_form(capsys):
    assert run(["analyze-field", "--form", "5,-15,15,-12"]) == 0
    out = capsys.readouterr().out
    assert "obstructed at 3, 7" in out


@pytest.mark.parametrize("argv", [
    ["bogus"],
    ["analyze-field", "--poly", "1,0,0"],
    ["analyze-field", "--poly", "1,0,0,-8"],          # reducible
    ["analyze-field", "--form", "1,0,0,-24"],         # not maximal
    ["enumerate", "--X", "0"],
    ["enumerate", "--X", str(2**63)],
    ["sigma", "--primes", "2,7", "--X", "100"],
    ["classgroup", "--disc", "5"],
    ["thue", "--form", "1,2,1,0", "--m", "1"],        # disc 0
    ["densities", "--primes", "abc"],
])
def test_usage_errors_exit_2(argv, capsys):
    with pytest.raises(SystemExit) as e:
        main(argv)
    assert e.value.code == 2
    assert "usage" in capsys.readouterr().err


def test_invariant_violation_exits_1(monkeypatch, capsys):
    import monocubic.sigmasets as S

    real = S.verify_counts

    def broken(spec, X, signs, count_fn=None):
        return real(spec, X, signs, count_fn=lambda D: 0)

    monkeypatch.setattr(S, "verify_counts", broken)
    assert run(["verify-counts", "--n", "6", "--X", "1e6", "--cft-sample", "0"]) == 1
    assert "invariant violated: exact count on U_n" in capsys.readouterr().err


def test_enumerate_is_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for p in (a, b):
        assert run(["enumerate", "--X", "3000", "--no-cache", "--no-timestamp", "--out", str(p)]) == 0
    assert a.read_bytes() == b.read_bytes()
    lines = a.read_text().splitlines()
    assert lines[0] == "disc,a,b,c,d" and lines[1] == "-23,1,-1,2,-1"
    out = capsys.readouterr().out
    assert "totally_real:" in out and "complex:" in out


def test_timestamp_header(tmp_path):
    p = tmp_path / "s.csv"
    assert run(["sigma", "--n", "6", "--X", "1e6", "--out", str(p)]) == 0
    first, second = p.read_text().splitlines()[:2]
    assert first.startswith("# generated ") and second.startswith("D,d,n,t")


def test_enumerate_uses_cache_dir(tmp_path, monkeypatch):
    monkeypatch.setenv("MONOCUBIC_CACHE_DIR", str(tmp_path))
    assert run(["enumerate", "--X", "500"]) == 0
    assert sorted(p.name for p in tmp_path.iterdir()) == ["fields_neg_500.bin", "fields_pos_500.bin"]


def test_sigma_and_verify_counts(tmp_path, capsys):
    p = tmp_path / "v.csv"
    assert run(["verify-counts", "--n", "6", "--X", "2e6", "--no-timestamp", "--out", str(p)]) == 0
    out = capsys.readouterr().out
    assert "mismatches: 0" in out
    assert p.read_text().startswith("D,d,n,t,in_sigma")


def test_classgroup_and_thue(capsys, tmp_path):
    p = tmp_path / "c.json"
    assert run(["classgroup", "--disc", "-3299", "--out", str(p)]) == 0
    assert "Z/3 x Z/9" in capsys.readouterr().out
    assert json.loads(p.read_text())["invariants"] == [3, 9]
    assert run(["thue", "--form", "1,0,0,-21", "--bound", "50"]) == 0
    assert "(1, 0)" in capsys.readouterr().out


def test_hasse_and_sha(tmp_path, capsys):
    p = tmp_path / "h.json"
    argv = ["hasse-candidates", "--primes", "2,5", "--X", "1e7", "--bound", "1000",
            "--height", "100", "--out", str(p)]
    assert run(argv) == 0
    rows = json.loads(p.read_text())
    assert rows and all(r["status"] == "candidate" for r in rows)
    assert "control [1, 0, 0, -21]: monogenic" in capsys.readouterr().out
    q = tmp_path / "h2.json"
    assert run(argv[:-1] + [str(q)]) == 0
    assert p.read_bytes() == q.read_bytes()
    assert run(["sha-evidence", "--n", "30", "--X", "1e7", "--bound", "1000", "--height", "100"]) == 0
    assert "discriminants" in capsys.readouterr().out


def test_selftest(capsys):
    assert run(["selftest", "--samples", "500"]) == 0
    out = capsys.readouterr().out
    assert "selftest passed" in out and out.count("0 mismatches") == 8


def test_integer_formats():
    from monocubic.cli import _int

    assert _int("1e7") == _int("10^7") == _int("10_000_000") == 10**7

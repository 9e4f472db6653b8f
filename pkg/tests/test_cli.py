import csv
import json

import pytest

from porosym.cli import EXIT_FAIL, EXIT_OK, EXIT_USAGE, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_tables_commutation_check(capsys):
    code, out, _ = run(capsys, "tables", "commutation", "--check")
    assert code == EXIT_OK
    assert "25/25" in out


def test_tables_invariants_check(capsys):
    code, out, _ = run(capsys, "tables", "invariants", "--check")
    assert code == EXIT_OK and "12/12" in out


def test_tables_adjoint_csv(capsys):
    code, out, _ = run(capsys, "tables", "adjoint", "--format", "csv")
    rows = list(csv.reader(out.splitlines()))
    assert code == EXIT_OK
    assert rows[0][0] == "Ad(exp(eps Xi)) Xj" and len(rows) == 6
    assert sum(len(r) - 1 for r in rows[1:]) == 25


def test_tables_json(capsys):
    code, out, _ = run(capsys, "tables", "commutation", "--format", "json")
    assert code == EXIT_OK and len(json.loads(out)) == 5


@pytest.mark.parametrize("alpha,case,label", [
    (["1", "0", "0", "0", "0"], 3, "X1"), (["0", "0", "1", "0", "0"], 2, "X3")])
def test_classify(capsys, alpha, case, label):
    code, out, _ = run(capsys, "classify", *alpha, "--format", "json")
    got = json.loads(out)
    assert code == EXIT_OK and (got["case"], got["representative"]) == (case, label)


def test_classify_verify(capsys):
    code, out, _ = run(capsys, "classify", "1", "2", "3", "4", "5", "--theta", "0.5", "--verify")
    assert code == EXIT_OK and "round-trip pass" in out


@pytest.mark.parametrize("argv", [
    ["classify", "0", "0", "0", "0", "0"],
    ["classify", "1", "0", "0", "0", "0", "--theta", "2"],
    ["classify", "1", "x", "0", "0", "0"],
    ["classify", "1", "0"],
    ["verify", "symmetries", "--h", "1"],
    ["simulate", "S2", "--param", "nonsense"],
    ["frobnicate"],
])
def test_usage_errors(capsys, argv):
    assert run(capsys, *argv)[0] == EXIT_USAGE


def test_verify_symmetries(capsys):
    code, out, _ = run(capsys, "verify", "symmetries", "--format", "json")
    rep = json.loads(out)
    passed = [c for c in rep["checks"] if c["verdict"] == "pass"]
    assert code == EXIT_OK and len(passed) == 5


def test_verify_conservation(capsys):
    code, out, _ = run(capsys, "verify", "conservation", "--h", "0", "--format", "json")
    checks = {c["name"]: c["verdict"] for c in json.loads(out)["checks"]}
    assert code == EXIT_OK
    assert all(checks[f"conservation/X{i}"] == "pass" for i in range(1, 6))


def test_verify_conservation_symbolic_h(capsys):
    code, out, _ = run(capsys, "verify", "conservation", "--h", "symbolic", "--format", "json")
    checks = {c["name"]: c for c in json.loads(out)["checks"]}
    assert code == EXIT_OK
    for i in range(1, 6):
        c = checks[f"conservation/X{i}/h"]
        assert c["verdict"] == "documented-discrepancy" and "h" in c["detail"]


def test_simulate_s2(capsys, tmp_path):
    code, out, _ = run(capsys, "simulate", "S2", "--theta", "0.5", "--h", "2", "--steps", "100",
                       "--out", str(tmp_path))
    assert code == EXIT_OK
    drift = float(out.rsplit("max change", 1)[1])
    assert drift < 1e-3
    assert {p.name for p in tmp_path.iterdir()} == {"S2_initial.csv", "S2_final.csv", "S2_exact.csv"}


def test_simulate_rejects_s1(capsys):
    code, _, err = run(capsys, "simulate", "S1")
    assert code == EXIT_USAGE and "ill-posed" in err


def test_simulate_dt_sweep_reports_ratio(capsys):
    code, out, _ = run(capsys, "simulate", "S3", "--h", "0", "--dt-sweep")
    assert "ratio=" in out and code in (EXIT_OK, EXIT_FAIL)


def test_export_f1(capsys, tmp_path):
    code, _, _ = run(capsys, "export", "F1", "--out", str(tmp_path))
    assert code == EXIT_OK
    assert len(list(tmp_path.glob("F1_*.csv"))) == 3


def test_export_f2_panels(capsys, tmp_path):
    code, _, _ = run(capsys, "export", "F2", "--out", str(tmp_path))
    names = {p.name for p in tmp_path.iterdir()}
    assert code == EXIT_OK
    for th in ("0.055", "0.555", "0.955"):
        assert any(th in n for n in names)
    assert "F2_h_x5_h.csv" in names


def test_export_f6_reports_domain_error(capsys, tmp_path):
    code, _, err = run(capsys, "export", "F6", "--out", str(tmp_path))
    assert code == EXIT_FAIL and "not written" in err
    assert not (tmp_path / "F6_c_x2_time.csv").exists()

import contextlib
import csv
import hashlib
import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from covbounds.cli import EXIT_FAILED, EXIT_OK, EXIT_USAGE, main
from covbounds.oracle import sweeps

HERE = Path(__file__).parent
GOLDEN = json.loads((HERE / "golden" / "cli.json").read_text())
U = ["--a", "0", "--b", "1", "--c", "0", "--d", "1"]


def run(argv):
    so, se = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(so), contextlib.redirect_stderr(se):
        code = main(argv)
    return code, so.getvalue(), se.getvalue()


@pytest.fixture
def in_tests_dir(monkeypatch):
    monkeypatch.chdir(HERE)


@pytest.mark.parametrize("name", sorted(GOLDEN))
def test_golden(name, in_tests_dir):
    entry = GOLDEN[name]
    code, out, err = run(entry["argv"])
    assert code == entry["exit"]
    assert err == entry["stderr"]
    if "stdout" in entry:
        assert out == entry["stdout"]
    else:
        assert len(out.splitlines()) == entry["stdout_lines"]
        assert out.splitlines()[:2] == entry["stdout_head"]
        assert hashlib.sha256(out.encode()).hexdigest() == entry["stdout_sha256"]


def test_golden_values_are_the_documented_ones():
    b = json.loads(GOLDEN["bounds_means"]["stdout"])
    assert (b["lower"], b["upper"]) == (-0.18, 0.12)
    assert json.loads(GOLDEN["standardize_cov"]["stdout"])["d_prime"] == 0.5
    assert json.loads(GOLDEN["bounds_invalid_box"]["stderr"])["error"] == "INVALID_BOX"
    w = json.loads(GOLDEN["witness_lower_means"]["stdout"])
    assert len(w["atoms"]) == 3 and w["cov"] == pytest.approx(-0.18, abs=1e-15)
    w = json.loads(GOLDEN["witness_upper_noise"]["stdout"])
    assert w["cov"] == pytest.approx(0.05, abs=1e-12) and not w["oracle_witness"]


def test_deterministic_output():
    argv = ["verify", "--suite", "lp", "--resolution", "11", "--cases", "8", "--seed", "3"]
    assert run(argv) == run(argv)
    argv = ["witness", *U, "--mean-x", "0.2", "--mean-y", "0.7", "--var-x", "0.1", "--var-y", "0.2", "--side", "lower"]
    assert run(argv) == run(argv)


def test_verify_records_shape():
    code, out, _ = run(["verify", "--suite", "beta", "--cases", "2", "--samples", "5000", "--seed", "1"])
    assert code == EXIT_OK
    recs = [json.loads(line) for line in out.splitlines()]
    assert all(set(r) == {"check", "params", "closed_form", "oracle_value", "gap", "pass"} for r in recs)
    assert all(r["params"]["seed"] == 1 for r in recs)


def test_verify_failure_exit_code(monkeypatch):
    bad = sweeps.record("lp", {}, [0, 0], [0, 0], 1.0, False)
    monkeypatch.setattr(sweeps, "lp_suite", lambda *a: [bad])
    code, out, _ = run(["verify", "--suite", "lp"])
    assert code == EXIT_FAILED
    assert json.loads(out)["pass"] is False


@pytest.mark.parametrize(
    "argv, code",
    [
        ([], "USAGE"),
        (["bounds", "--a", "0"], "USAGE"),
        (["bounds", *U, "--mean-x", "0.5"], "INCOMPLETE_MOMENTS"),
        (["bounds", *U, "--mean-x", "2", "--mean-y", "0.5"], "MEAN_OUTSIDE_BOX"),
        (["bounds", *U, "--mean-x", "0.3", "--mean-y", "0.5", "--var-x", "0.3", "--var-y", "0.1"], "VARIANCE_INFEASIBLE"),
        (["witness", *U, "--side", "left"], "USAGE"),
        (["standardize", *U], "USAGE"),
        (["standardize", *U, "--cov", "0.1", "--data", "data/corners.csv"], "USAGE"),
        (["standardize", *U, "--data", "data/malformed.csv"], "MALFORMED_CSV"),
        (["standardize", *U, "--data", "data/empty.csv"], "EMPTY_DATASET"),
        (["standardize", *U, "--data", "data/missing.csv"], "MALFORMED_CSV"),
        (["verify", "--suite", "lp", "--resolution", "1"], "USAGE"),
        (["verify", "--suite", "lp", "--cases", "0"], "USAGE"),
        (["verify", "--suite", "nope"], "USAGE"),
    ],
)
def test_errors_exit_two_with_json(argv, code, in_tests_dir):
    rc, out, err = run(argv)
    assert rc == EXIT_USAGE
    assert out == ""
    assert json.loads(err)["error"] == code


def test_rows_outside_box_are_rejected(in_tests_dir):
    rc, out, _ = run(["standardize", *U, "--data", "data/with_outside.csv"])
    assert rc == EXIT_OK
    diag = json.loads(out)["diagnostics"]
    assert diag["rows_used"] == 3
    assert diag["rejected"] == [{"line": 3, "reason": "OUTSIDE_BOX"}]


def test_data_moments_are_population(in_tests_dir):
    _, out, _ = run(["standardize", *U, "--data", "data/with_outside.csv"])
    m = json.loads(out)["moments"]
    xs, ys = [0.2, 0.9, 0.5], [0.4, 0.1, 0.5]
    mx = sum(xs) / 3
    assert m["mean_x"] == pytest.approx(mx, rel=1e-15)
    assert m["var_x"] == pytest.approx(sum((x - mx) ** 2 for x in xs) / 3, rel=1e-14)
    assert m["mean_y"] == pytest.approx(sum(ys) / 3, rel=1e-15)


@pytest.mark.parametrize(
    "moments, side, measure",
    [
        (["--mean-x", "0.3", "--mean-y", "0.6"], "lower", "d_prime"),
        (["--mean-x", "0.3", "--mean-y", "0.6"], "upper", "d_prime"),
        (["--mean-x", "0.1", "--mean-y", "0.5", "--var-x", "0.09", "--var-y", "0.25"], "upper", "d_second"),
        (["--mean-x", "0.4", "--mean-y", "0.7", "--var-x", "0.05", "--var-y", "0.1"], "lower", "d_second"),
        (["--var-x", "0.04", "--var-y", "0.09"], "upper", "r"),
        ([], "lower", "d"),
    ],
)
def test_witness_round_trip(moments, side, measure, tmp_path):
    box = ["--a", "-1", "--b", "2", "--c", "0", "--d", "0.5"] if not moments else U
    rc, out, _ = run(["witness", *box, *moments, "--side", side])
    assert rc == EXIT_OK
    atoms = json.loads(out)["atoms"]
    path = tmp_path / "w.csv"
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["x", "y", "p"])
        w.writerows([a["x"], a["y"], a["p"]] for a in atoms)
    rc, out, _ = run(["standardize", *box, "--data", str(path)])
    assert rc == EXIT_OK
    value = json.loads(out)[measure]
    assert value == pytest.approx(-1.0 if side == "lower" else 1.0, abs=1e-9)


def test_console_entry_point_subprocess():
    proc = subprocess.run(
        [sys.executable, "-m", "covbounds.cli", "bounds", "--a", "1", "--b", "0", "--c", "0", "--d", "1"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 2
    assert json.loads(proc.stderr)["error"] == "INVALID_BOX"
    assert proc.stdout == ""

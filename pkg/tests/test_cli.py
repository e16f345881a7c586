import csv
import io
import json
import os
import subprocess
import sys
from decimal import Decimal

import pytest

from falkner_skan.cli import parse_range, run
from falkner_skan.reference import load_reference, matching_digits, printed_digits


def _run(argv):
    buf = io.StringIO()
    code = run(argv, buf)
    return code, buf.getvalue()


def _subprocess(argv, env_extra=None):
    env = dict(os.environ)
    env.pop("FS_TIER", None)
    env.update(env_extra or {})
    return subprocess.run(
        [sys.executable, "-m", "falkner_skan", *argv],
        capture_output=True, text=True, env=env, check=False,
    )


def test_solve_json():
    code, text = _run(["solve", "--beta0", "2", "--beta", "1", "--tol", "1e-12"])
    assert code == 0
    doc = json.loads(text)
    assert abs(doc["alpha"] - 1.3119376938798) < 1e-12
    assert doc["branch"] == "forward"
    assert doc["tier"] == "standard"
    assert doc["eta_inf_lo"] < doc["eta_inf_hi"]
    # seventeen significant digits with an explicit exponent sign
    line = next(l for l in text.splitlines() if '"alpha"' in l)
    mantissa = line.split(":")[1].strip().rstrip(",").split("e")[0]
    assert len(mantissa.replace(".", "").lstrip("-")) == 17


def test_solve_reverse_branch():
    code, text = _run(["solve", "--beta", "-0.15", "--branch", "reverse"])
    assert code == 0
    assert json.loads(text)["alpha"] == pytest.approx(-1.33421237895e-01, abs=2e-12)


def test_profile_reproduces_reference_profile():
    code, text = _run(["profile", "--beta0", "0.5", "--beta", "0", "--grid", "0:8.8:0.2",
                       "--tol", "1e-15", "--format", "csv"])
    assert code == 0
    rows = list(csv.reader(io.StringIO(text)))
    assert rows[0] == ["eta", "f", "fp", "fpp"]
    body = rows[1:]
    assert len(body) == 45
    _, profile = load_reference()
    for got, ref in zip(body, profile):
        for value, expected in zip(got[1:], (ref.f, ref.fp, ref.fpp)):
            assert matching_digits(value, expected) >= printed_digits(expected) - 1, (ref.eta, expected)
        for field in got:
            assert field.split("e")[1][0] in "+-"


def test_profile_with_given_angle_and_table_format():
    code, text = _run(["profile", "--beta0", "0.5", "--alpha", "0.3320573362151963",
                       "--grid", "0:1:0.5", "--format", "table"])
    assert code == 0
    lines = text.strip().splitlines()
    assert lines[0].split() == ["eta", "f", "fp", "fpp"]
    assert len(lines) == 2 + 3


def test_usage_errors_exit_2():
    assert _run(["solve", "--beta", "nan"])[0] == 2
    assert _run(["solve", "--tol", "-1"])[0] == 2
    assert _run(["profile", "--grid", "0:1"])[0] == 2
    assert _run(["profile", "--grid", "1:0:0.1"])[0] == 2
    assert _run(["frobnicate"])[0] == 2
    assert _run(["solve", "--beta", "0.2", "--branch", "reverse"])[0] == 2
    assert _run(["verify", "--suite", "no-such-case"])[0] == 2


def test_solver_error_exits_1():
    code, _ = _run(["solve", "--beta", "-0.25"])
    assert code == 1


def test_parse_range():
    assert parse_range("0:1:0.25") == [0, Decimal("0.25"), Decimal("0.5"), Decimal("0.75"), 1]
    assert parse_range("0:8.8:0.2")[-1] == Decimal("8.8")
    assert len(parse_range("0:8.8:0.2")) == 45


def test_bad_tier_environment_is_usage_error():
    proc = _subprocess(["solve"], {"FS_TIER": "quad"})
    assert proc.returncode == 2


def test_main_exit_codes():
    assert _subprocess(["solve", "--beta", "-0.25"]).returncode == 1
    assert _subprocess(["solve", "--beta", "bogus"]).returncode == 2


@pytest.mark.slow
def test_extended_tier_from_environment():
    proc = _subprocess(["profile", "--beta0", "0", "--beta", "1", "--alpha",
                        "1.1547005383792515290182975610039149", "--grid", "0:1:0.5"],
                       {"FS_TIER": "extended"})
    assert proc.returncode == 0, proc.stderr
    rows = json.loads(proc.stdout, parse_float=Decimal)
    assert rows[0]["fpp"] == Decimal("1.15470053837925152901829756100392")
    assert rows[0]["f"] == 0
    for line in proc.stdout.splitlines():
        if ":" in line:
            value = line.split(":")[1].strip().rstrip(",")
            mantissa, exp = value.split("e")
            assert len(mantissa.replace(".", "").lstrip("-")) == 33
            assert exp[0] in "+-" and len(exp) == 3


def test_repeated_runs_are_byte_identical():
    argv = ["sweep", "--beta-list", "0,0.5,1", "--format", "csv"]
    assert _run(argv) == _run(argv)


def test_sweep_jobs_invariance():
    base = ["sweep", "--beta-list", "1,-0.1,0.5,0", "--format", "csv", "--tol", "1e-10"]
    assert _run(base + ["--jobs", "1"]) == _run(base + ["--jobs", "2"])


def test_sweep_partial_failure_exits_1():
    code, text = _run(["sweep", "--beta-list", "0,-0.3", "--format", "json", "--no-eta-inf"])
    assert code == 1
    rows = json.loads(text)
    assert rows[0]["alpha"] is not None
    assert rows[1]["alpha"] is None and rows[1]["error"]


def test_sweep_range():
    code, text = _run(["sweep", "--beta-range", "0:1:0.5", "--format", "csv", "--no-eta-inf"])
    assert code == 0
    assert len(text.strip().splitlines()) == 4


def test_export_tables(tmp_path):
    code, text = _run(["export-tables", "--out", str(tmp_path)])
    assert code == 0
    assert (tmp_path / "homann.csv").exists()
    assert (tmp_path / "blasius-profile.csv").exists()


def test_verify_single_case():
    code, text = _run(["verify", "--suite", "homann-1e8", "--format", "json"])
    assert code == 0
    doc = json.loads(text)
    assert doc[0]["status"] == "pass"


@pytest.mark.slow
def test_verify_all_standard():
    code, text = _run(["verify", "--format", "json"])
    doc = json.loads(text)
    cases = [r for r in doc if "status" in r and "column" not in r]
    passes = [r for r in cases if r["status"] == "pass"]
    assert len(passes) >= 60
    assert code == 0

import csv
import io
import json
import math

import pytest

from betasimplex import checks
from betasimplex.cli import main, parse_beta
from betasimplex.estimators import WORKERS_ENV
from betasimplex.report import CSV_COLUMNS, ResultRow, RunReport


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_exact_s0_json(capsys):
    code, out, _ = run(capsys, "exact", "s0", "--d", "3", "--beta", "0", "--format", "json")
    assert code == 0
    data = json.loads(out)
    (row,) = data["results"]
    assert row["name"] == "E_s0"
    assert row["value"] == pytest.approx(401 / 2560, abs=1e-11)
    assert data["command"] == "betasimplex exact s0 --d 3 --beta 0 --format json"
    assert "duration_s" not in data and "seconds" not in row


def test_exact_table_human(capsys):
    code, out, _ = run(capsys, "exact", "table", "--d", "4", "--beta", "-1")
    assert code == 0
    assert "E_s3" in out and "2.5" in out
    assert "duration:" in out


def test_exact_facets(capsys):
    code, out, _ = run(capsys, "exact", "facets", "--n", "5", "--d", "3", "--beta", "-0.5",
                       "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert float(rows[0]["value"]) == pytest.approx(20 / 3 - 539 / (72 * math.pi ** 2), abs=1e-9)


def test_csv_column_order(capsys):
    _, out, _ = run(capsys, "exact", "table", "--d", "3", "--beta", "1", "--format", "csv")
    header, *rows = out.strip().splitlines()
    assert tuple(header.split(",")) == CSV_COLUMNS
    assert len(rows) == 3


@pytest.mark.parametrize("argv", [
    ["exact", "s0", "--d", "5", "--beta", "0"],
    ["exact", "s0", "--d", "3", "--beta", "-2"],
    ["exact", "s0", "--d", "3", "--beta", "abc"],
    ["exact", "facets", "--d", "3", "--beta", "0"],
    ["exact", "facets", "--n", "3", "--d", "3", "--beta", "0"],
    ["mc", "facets", "--n", "6", "--d", "4", "--beta", "0"],
    ["mc", "s0-direct", "--d", "3", "--beta", "0", "--samples", "0"],
    ["verify", "--suite", "other"],
    ["frobnicate"],
])
def test_usage_errors_exit_2(capsys, argv):
    with pytest.raises(SystemExit) as info:
        main(argv)
    assert info.value.code == 2
    capsys.readouterr()


def test_numerical_failure_exits_3(capsys):
    code, out, err = run(capsys, "exact", "s0", "--d", "4", "--beta", "0.3", "--tol", "1e-30")
    assert code == 3
    assert out == "" and "numerical failure" in err


def test_parse_beta_sentinel():
    assert parse_beta("-1") == -1.0
    assert parse_beta("-1.000") == -1.0
    assert parse_beta("0.5") == 0.5


def test_verify_quick_passes(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "paper", "--quick")
    assert code == 0
    assert "FAIL" not in out and "checks passed" in out


def test_verify_catches_wrong_constant(capsys, monkeypatch):
    # negative control: a corrupted reference value must fail the suite
    monkeypatch.setattr(checks, "BALL_D3", 401 / 2560 + 1e-6)
    code, out, err = run(capsys, "verify", "--quick", "--format", "json")
    assert code == 1
    failed = [r["name"] for r in json.loads(out)["results"] if r["passed"] is False]
    assert failed == ["c2.s0_d3_ball"]
    assert "c2.s0_d3_ball" in err


def test_mc_is_deterministic_and_worker_free(capsys):
    argv = ["mc", "s0-projection", "--d", "3", "--beta", "0", "--samples", "60000",
            "--seed", "4", "--format", "json"]
    _, first, _ = run(capsys, *argv, "--workers", "1")
    _, second, _ = run(capsys, *argv, "--workers", "2")
    a, b = json.loads(first), json.loads(second)
    assert a["results"] == b["results"]
    assert a["seed"] == 4
    assert a["results"][1]["value"] == pytest.approx(a["results"][0]["value"] / 2)


def test_workers_env(capsys, monkeypatch):
    monkeypatch.setenv(WORKERS_ENV, "2")
    _, out, _ = run(capsys, "mc", "facets", "--n", "5", "--d", "2", "--beta", "0",
                    "--samples", "1000", "--format", "json")
    assert json.loads(out)["parameters"]["workers"] == 2


def test_out_file_and_timing(capsys, tmp_path):
    target = tmp_path / "report.json"
    code, out, _ = run(capsys, "exact", "s0", "--d", "3", "--beta", "-1", "--format", "json",
                       "--timing", "--out", str(target))
    assert code == 0 and out == ""
    report = RunReport.from_json(target.read_text())
    assert report.duration_s is not None and report.duration_s >= 0
    assert report.results[0].value == pytest.approx(0.125, abs=1e-11)


def test_report_round_trip():
    report = RunReport("betasimplex x", {"a": 1}, [
        ResultRow("r1", 0.5, 1e-3, 0.5, 1e-2, True, "ok", seconds=0.1),
        ResultRow("r2", note="info"),
    ], seed=7, duration_s=1.5)
    back = RunReport.from_json(report.to_json())
    assert back == report
    assert report.without_timings().to_json() == RunReport.from_json(
        report.without_timings().to_json()).to_json()
    assert report.passed and not report.failures

"""Tests for the command line interface."""

from __future__ import annotations

import csv
import io
import json

import numpy as np
import pytest

from lp_hodge import cli
from lp_hodge.cli import main
from lp_hodge.const import EXIT_INPUT_ERROR, EXIT_OK, EXIT_SOLVER_FAILED, REPORT_SCHEMA, VERDICT_VANISHES_REDUCED
from lp_hodge.discrete import Cochain, CochainComplex, dump_cochain, dump_complex
from lp_hodge.exceptions import SolverError
from lp_hodge.verification import load_golden_table


def run_json(argv: list[str], capsys: pytest.CaptureFixture[str]) -> dict:
    """Run command and return its JSON report."""

    assert main(argv) == EXIT_OK
    return json.loads(capsys.readouterr().out)


def test_vanish_symmetric(capsys: pytest.CaptureFixture[str]) -> None:
    """Test E8 at k = 3 and p = 2."""

    report = run_json(["vanish", "symmetric", "--group", "E8", "--k", "3", "--p", "2"], capsys)
    assert report["schema"] == REPORT_SCHEMA
    assert report["command"][:2] == ["vanish", "symmetric"]
    assert len(report["config_hash"]) == 64
    assert report["records"][0]["outputs"]["verdict"] == VERDICT_VANISHES_REDUCED
    assert report["summary"] == {"total": 1, "passed": 1, "failed": 0}


def test_vanish_pinched(capsys: pytest.CaptureFixture[str]) -> None:
    """Test n = 5, k = 2, δ = 1/2 at p = 1.4."""

    report = run_json(["vanish", "pinched", "--n", "5", "--k", "2", "--delta", "0.5", "--p", "1.4"], capsys)
    assert report["records"][0]["outputs"]["verdict"] == VERDICT_VANISHES_REDUCED


def test_table_csv_matches_golden(capsys: pytest.CaptureFixture[str]) -> None:
    """Test CSV table equals the checked-in file."""

    assert main(["table", "gromov"]) == EXIT_OK
    rows = list(csv.DictReader(io.StringIO(capsys.readouterr().out)))
    assert rows == load_golden_table()


def test_table_json(capsys: pytest.CaptureFixture[str]) -> None:
    """Test JSON table has one record per row."""

    report = run_json(["table", "gromov", "--format", "json"], capsys)
    assert report["summary"]["total"] == len(load_golden_table())


def test_verify_writes_file(tmp_path, capsys: pytest.CaptureFixture[str]) -> None:
    """Test a verification suite writes its report to a file."""

    path = tmp_path / "report.json"
    assert main(["--seed", "3", "verify", "roots", "--json", str(path), "--workers", "2"]) == EXIT_OK
    assert capsys.readouterr().out == ""

    report = json.loads(path.read_text(encoding="utf-8"))
    assert report["summary"]["failed"] == 0
    assert all(item["case"].startswith("roots/") for item in report["records"])


def test_solve_representative(tmp_path, capsys: pytest.CaptureFixture[str], cycle4: CochainComplex) -> None:
    """Test representative solve from JSON files."""

    dump_complex(cycle4, tmp_path / "complex.json")
    dump_cochain(Cochain(1, [4.0, 0.0, 0.0, 0.0]), tmp_path / "z.json")
    argv = ["solve", "representative", "--complex", str(tmp_path / "complex.json"), "--z", str(tmp_path / "z.json")]

    report = run_json([*argv, "--p", "3"], capsys)
    np.testing.assert_allclose(report["records"][0]["outputs"]["representative"], 1.0, atol=1e-6)


def test_solver_failure(
    tmp_path, capsys: pytest.CaptureFixture[str], cycle4: CochainComplex, monkeypatch: pytest.MonkeyPatch
) -> None:
    """Test a solve that does not converge exits with the solver failure code."""

    def stalled(*args, **kwargs) -> None:
        raise SolverError("no_convergence", iterations=200, residual=1e-3)

    monkeypatch.setattr(cli, "pharmonic_representative", stalled)
    dump_complex(cycle4, tmp_path / "complex.json")
    dump_cochain(Cochain(1, [4.0, 0.0, 0.0, 0.0]), tmp_path / "z.json")
    argv = ["solve", "representative", "--complex", str(tmp_path / "complex.json"), "--z", str(tmp_path / "z.json")]

    assert main([*argv, "--p", "3"]) == EXIT_SOLVER_FAILED
    assert capsys.readouterr().out == ""


@pytest.mark.parametrize(
    "argv",
    [
        ["vanish", "symmetric", "--group", "Z3", "--k", "1"],
        ["vanish", "symmetric", "--group", "A3", "--k", "1", "--p", "1"],
        ["vanish", "pinched", "--n", "4", "--k", "2", "--delta", "1.5", "--p", "2"],
        ["solve", "primitive", "--complex", "missing.json", "--z", "missing.json", "--p", "2"],
        ["--n-mc", "10", "verify", "roots"],
        ["frobnicate"],
    ],
)
def test_input_errors(argv: list[str], capsys: pytest.CaptureFixture[str]) -> None:
    """Test invalid input exits with the input error code."""

    assert main(argv) == EXIT_INPUT_ERROR
    assert capsys.readouterr().out == ""


def test_help() -> None:
    """Test --help exits cleanly."""

    assert main(["--help"]) == EXIT_OK

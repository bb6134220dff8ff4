"""Tests for verification records and suite orchestration."""

from __future__ import annotations

from fractions import Fraction

import pytest

from lp_hodge import verification
from lp_hodge.exceptions import ComplexError
from lp_hodge.verification import record, run_suites


def test_record_pass_defaults() -> None:
    """Test pass follows residual and tolerance unless given."""

    assert record("a/b", {}, {}, 1e-13, 1e-12)["pass"]
    assert not record("a/b", {}, {}, 1e-11, 1e-12)["pass"]
    assert not record("a/b", {}, {})["pass"]
    assert record("a/b", {}, {}, passed=True)["pass"]
    assert record("a/b", {"p": Fraction(3, 2)}, {})["inputs"]["p"] == {"num": 3, "den": 2, "float": 1.5}


def test_run_suites_sorted(config: dict) -> None:
    """Test exterior and roots suites pass and come back sorted."""

    records = run_suites(["roots", "exterior"], config, workers=2)
    cases = [item["case"] for item in records]

    assert cases == sorted(cases)
    assert {case.split("/")[0] for case in cases} == {"exterior", "roots"}
    assert all(item["pass"] for item in records)


def test_aborted_suite(config: dict, monkeypatch: pytest.MonkeyPatch) -> None:
    """Test a library error inside a suite becomes one failing record."""

    def broken(config: dict) -> list:
        raise ComplexError("invalid_complex", detail="broken")

    monkeypatch.setitem(verification.SUITE_FUNCTIONS, "discrete", broken)
    records = run_suites(["discrete"], config)

    assert [item["case"] for item in records] == ["discrete/aborted"]
    assert not records[0]["pass"]
    assert records[0]["outputs"]["key"] == "invalid_complex"


def test_decay_suite_passes(config: dict) -> None:
    """Test every decay case passes, including p = 1.5 out to τ = 5."""

    records = run_suites(["decay"], config)

    assert records
    assert [item["case"] for item in records if not item["pass"]] == []
    assert all(item["outputs"].get("annulus_residual", 0.0) <= 1e-6 for item in records)

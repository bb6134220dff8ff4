"""Types for the lp-hodge package."""

from typing import Any, TypedDict


class SerializedRational(TypedDict):
    """Exact rational with its float value."""

    num: int
    den: int
    float: float


# "pass" is a keyword, hence the functional form
CaseRecord = TypedDict(
    "CaseRecord",
    {
        "case": str,
        "inputs": dict[str, Any],
        "outputs": dict[str, Any],
        "residual": float | None,
        "tolerance": float | None,
        "pass": bool,
    },
)


class ReportSummary(TypedDict):
    """Record counts of a report."""

    total: int
    passed: int
    failed: int


class Report(TypedDict):
    """Versioned command report."""

    schema: str
    command: list[str]
    config_hash: str
    records: list[CaseRecord]
    summary: ReportSummary


class ComplexJson(TypedDict):
    """Cochain complex file with sparse triplets per degree."""

    dims: list[int]
    d: list[dict[str, Any]]
    weights: list[list[float]]


class CochainJson(TypedDict):
    """Cochain file."""

    k: int
    coeffs: list[float]

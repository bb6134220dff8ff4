"""Tests for pinched-curvature thresholds and pointwise bounds."""

from __future__ import annotations

import math

import numpy as np
import pytest

from lp_hodge.const import VERDICT_NOT_COVERED, VERDICT_VANISHES_REDUCED, VERDICT_VANISHES_TORSION
from lp_hodge.exceptions import ExponentError
from lp_hodge.pinching import (
    CHAIN_HIGH,
    CHAIN_LOW,
    PinchSpec,
    argmin_objective,
    comparison_box,
    decay_rates,
    high_threshold,
    injectivity_check,
    low_threshold,
    pinch_grid,
    reduced_thresholds,
    sampled_minimum,
    sweep_bound_checks,
    wp_pointwise_bound_check,
    wp_pointwise_bound_check_high,
)


def test_thresholds() -> None:
    """Test threshold formulas on hand-computed values."""

    assert low_threshold(5, 2, 0.5) == 1.5
    assert low_threshold(4, 1, 1.0) == 3.0
    assert high_threshold(4, 1, 1.0) == math.inf
    assert high_threshold(4, 3, 1.0) == 1.5


def test_low_range_verdict() -> None:
    """Test n = 5, k = 2, δ = 1/2 vanishes below p = 3/2."""

    report = reduced_thresholds(PinchSpec(5, 2, 0.5, 1.4))
    assert report.verdict == VERDICT_VANISHES_REDUCED
    assert report.vanishing_range == CHAIN_LOW
    assert report.decay_rate_low == pytest.approx(2 * (1.5 - 1.4))

    report = reduced_thresholds(PinchSpec(5, 2, 0.5, 1.6))
    assert report.verdict == VERDICT_NOT_COVERED
    assert report.vanishing_range is None


def test_high_range_verdict() -> None:
    """Test high range fires above (n-k)/(δ(k-1)) + 1 when k > n/p."""

    report = reduced_thresholds(PinchSpec(4, 3, 1.0, 2.0))
    assert report.high_side_condition
    assert report.verdict == VERDICT_VANISHES_REDUCED
    assert report.vanishing_range == CHAIN_HIGH


def test_torsion_verdict() -> None:
    """Test n = 4, k = 2, δ = 1 has torsion threshold 3."""

    report = reduced_thresholds(PinchSpec(4, 2, 1.0, 2.5))
    assert report.torsion_threshold == 3.0
    assert report.torsion_side_condition
    assert report.torsion_verdict == VERDICT_VANISHES_TORSION


def test_injectivity() -> None:
    """Test injectivity for n = 4, k = 3, δ = 1, p = 1.1, q = 2."""

    report = injectivity_check(PinchSpec(4, 3, 1.0, 1.1, q=2.0))
    assert report.threshold == pytest.approx(1.5)
    assert report.bound == pytest.approx(0.8)
    assert report.gap == pytest.approx(0.45)
    assert report.epsilon == pytest.approx(0.35 / 2.2)
    assert report.injective

    assert reduced_thresholds(PinchSpec(4, 3, 1.0, 1.1, q=2.0)).as_dict()["injectivity"]["injective"]


def test_decay_rates_vanish_at_thresholds() -> None:
    """Test both decay rates vanish exactly at their thresholds."""

    low, _ = decay_rates(PinchSpec(6, 2, 0.5, low_threshold(6, 2, 0.5)))
    _, high = decay_rates(PinchSpec(6, 4, 0.5, high_threshold(6, 4, 0.5)))
    assert low == pytest.approx(0.0, abs=1e-12)
    assert high == pytest.approx(0.0, abs=1e-12)


@pytest.mark.parametrize(
    "kwargs",
    [
        {"n": 1, "k": 1, "delta": 0.5, "p": 2.0},
        {"n": 4, "k": 4, "delta": 0.5, "p": 2.0},
        {"n": 4, "k": 2, "delta": 0.0, "p": 2.0},
        {"n": 4, "k": 2, "delta": 1.5, "p": 2.0},
        {"n": 4, "k": 2, "delta": 0.5, "p": 1.0},
        {"n": 4, "k": 2, "delta": 0.5, "p": 2.0, "q": 1.5},
    ],
)
def test_invalid_spec(kwargs: dict) -> None:
    """Test parameter validation."""

    with pytest.raises(ExponentError):
        PinchSpec(**kwargs)


def test_comparison_box() -> None:
    """Test box endpoints, δ = 1 collapses the box."""

    lower, upper = comparison_box(1.0, 2.0)
    assert lower == pytest.approx(upper)
    assert upper == pytest.approx(1 / math.tanh(2.0))
    assert comparison_box(0.0, 2.0)[0] == pytest.approx(0.5)
    with pytest.raises(ExponentError):
        comparison_box(0.5, 0.0)


@pytest.mark.parametrize(("n", "k", "p"), [(4, 1, 1.5), (5, 2, 1.1), (8, 3, 2.0)])
@pytest.mark.parametrize("delta", [0.1, 0.5, 1.0])
@pytest.mark.parametrize("r", [0.1, 1.0, 10.0])
def test_low_chain(n: int, k: int, p: float, delta: float, r: float, rng: np.random.Generator) -> None:
    """Test exact minimum dominates the bound and is never undercut by sampling."""

    check = wp_pointwise_bound_check(n, k, p, delta, r)
    assert check.ok
    assert check.chain == CHAIN_LOW
    assert sampled_minimum(check, 100, rng) >= check.exact_min - 1e-9
    assert argmin_objective(check) == pytest.approx(check.exact_min, abs=1e-9)


@pytest.mark.parametrize(("n", "k", "p"), [(4, 3, 2.0), (5, 4, 10.0), (3, 2, 3.0)])
@pytest.mark.parametrize("delta", [0.25, 1.0])
def test_high_chain(n: int, k: int, p: float, delta: float, rng: np.random.Generator) -> None:
    """Test the high chain at r = 1."""

    check = wp_pointwise_bound_check_high(n, k, p, delta, 1.0)
    assert check.ok
    assert sampled_minimum(check, 100, rng) >= check.exact_min - 1e-9
    assert argmin_objective(check) == pytest.approx(check.exact_min, abs=1e-9)


def test_chains_need_their_range() -> None:
    """Test each chain rejects the other side of p = n/k."""

    with pytest.raises(ExponentError):
        wp_pointwise_bound_check(4, 2, 2.5, 0.5, 1.0)
    with pytest.raises(ExponentError):
        wp_pointwise_bound_check_high(4, 2, 1.5, 0.5, 1.0)


def test_default_sweep(config: dict) -> None:
    """Test every cell of the default grid."""

    cells = pinch_grid(config)
    checks = sweep_bound_checks(cells)
    assert len(cells) >= 500
    assert {check.chain for check in checks} == {CHAIN_LOW, CHAIN_HIGH}
    assert all(check.ok for check in checks)

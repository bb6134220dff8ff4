"""Vanishing thresholds for pinched negative curvature.

The pointwise checks minimize the curvature weight over the comparison box
δcoth(δr) ≤ λ_a ≤ coth(r) of Hessian eigenvalues and over unit k-forms. The
objective is linear in λ and diagonal on monomials, so the minimum sits on a box
vertex and a monomial, both enumerated exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
import logging
import math

import numpy as np

from .const import VERDICT_NOT_COVERED, VERDICT_VANISHES_REDUCED, VERDICT_VANISHES_TORSION
from .exceptions import ExponentError
from .exterior import FormVector, Frame, quadratic_form, weight_extremes
from .utils import check_exponent

_LOGGER = logging.getLogger(__name__)

INF = math.inf

CHAIN_LOW = "low"
CHAIN_HIGH = "high"


@dataclass(frozen=True)
class PinchSpec:
    """Dimension, degree, pinching −1 ≤ sec ≤ −δ² and exponents of a query."""

    n: int
    k: int
    delta: float
    p: float
    q: float | None = None

    def __post_init__(self) -> None:
        """Validate parameter ranges."""

        if self.n < 2:
            raise ExponentError("pinch_range", detail=f"dimension {self.n} < 2")
        if not 1 <= self.k <= self.n - 1:
            raise ExponentError("pinch_range", detail=f"degree {self.k} outside 1..{self.n - 1}")
        if not 0 < self.delta <= 1:
            raise ExponentError("delta_range", delta=self.delta)
        check_exponent(self.p)
        if self.q is not None and self.q < self.p:
            raise ExponentError("conjugate_order", q=self.q, p=self.p)


@dataclass(frozen=True)
class InjectivityReport:
    """Injectivity of L_p into L_q cohomology in degree k."""

    threshold: float
    bound: float
    gap: float
    epsilon: float
    injective: bool


@dataclass(frozen=True)
class ThresholdReport:
    """All pinched-curvature thresholds of a PinchSpec."""

    spec: PinchSpec
    low_threshold: float
    high_threshold: float
    torsion_threshold: float
    decay_rate_low: float
    decay_rate_high: float
    low_side_condition: bool
    high_side_condition: bool
    torsion_side_condition: bool
    verdict: str
    vanishing_range: str | None
    torsion_verdict: str
    injectivity: InjectivityReport | None = None

    def as_dict(self) -> dict:
        """Return report as a plain dict."""

        return {
            "n": self.spec.n,
            "k": self.spec.k,
            "delta": self.spec.delta,
            "p": self.spec.p,
            "q": self.spec.q,
            "low_threshold": self.low_threshold,
            "high_threshold": self.high_threshold,
            "torsion_threshold": self.torsion_threshold,
            "decay_rate_low": self.decay_rate_low,
            "decay_rate_high": self.decay_rate_high,
            "low_side_condition": self.low_side_condition,
            "high_side_condition": self.high_side_condition,
            "torsion_side_condition": self.torsion_side_condition,
            "verdict": self.verdict,
            "vanishing_range": self.vanishing_range,
            "torsion_verdict": self.torsion_verdict,
            "injectivity": None if self.injectivity is None else vars(self.injectivity),
        }


@dataclass(frozen=True)
class PinchCell:
    """One point of the sweep grid."""

    n: int
    k: int
    p: float
    delta: float
    r: float


@dataclass(frozen=True)
class BoundCheck:
    """Exact minimum of a pointwise chain against its displayed bounds."""

    cell: PinchCell
    chain: str
    exact_min: float
    stated_bound: float
    intermediate_bound: float | None
    argmin_vertex: tuple[float, ...]
    argmin_subset: tuple[int, ...]
    ok: bool

    def as_dict(self) -> dict:
        """Return check as a plain dict."""

        return {
            **vars(self.cell),
            "chain": self.chain,
            "exact_min": self.exact_min,
            "stated_bound": self.stated_bound,
            "intermediate_bound": self.intermediate_bound,
            "argmin_subset": list(self.argmin_subset),
            "ok": self.ok,
        }


def conjugate_exponent(p: float | Fraction) -> float | Fraction:
    """Return p' = p/(p-1)."""

    check_exponent(p)
    return p / (p - 1)


def low_threshold(n: int, k: int, delta: float) -> float:
    """Return δ(n-k-1)/k + 1."""

    return delta * (n - k - 1) / k + 1


def high_threshold(n: int, k: int, delta: float) -> float:
    """Return (n-k)/(δ(k-1)) + 1, infinite for k = 1."""

    if k == 1:
        return INF
    return (n - k) / (delta * (k - 1)) + 1


def torsion_threshold(spec: PinchSpec) -> tuple[float, bool]:
    """Return δ(n-k)/(k-1) + 1 and whether the side condition k-1 < n/p holds."""

    side_condition = spec.k - 1 < spec.n / spec.p
    if spec.k == 1:
        return INF, side_condition

    return spec.delta * (spec.n - spec.k) / (spec.k - 1) + 1, side_condition


def decay_rates(spec: PinchSpec) -> tuple[float, float]:
    """Return exponential decay rates of the low and high ranges."""

    n, k, delta, p = spec.n, spec.k, spec.delta, spec.p
    rate_low = k * (delta * (n - k - 1) / k + 1 - p)
    rate_high = k * (p - 1) * (delta * (k - 1) / p - (n - k) / (p * (p - 1)))

    return rate_low, rate_high


def injectivity_check(spec: PinchSpec) -> InjectivityReport:
    """Return whether L_p → L_q cohomology is injective in degree k.

    Both inequalities must be strict. ε is positive iff the map is injective.
    """

    if spec.q is None:
        raise ExponentError("conjugate_order", q=None, p=spec.p)
    n, k, delta, p, q = spec.n, spec.k, spec.delta, spec.p, spec.q

    threshold, _ = torsion_threshold(spec)
    bound = delta * (n - k) - (p - 1) * (k - 1)
    gap = (q - p) / q
    epsilon = (bound - gap) / (2 * p)

    return InjectivityReport(
        threshold=threshold,
        bound=bound,
        gap=gap,
        epsilon=epsilon,
        injective=p < threshold and gap < bound,
    )


def reduced_thresholds(spec: PinchSpec) -> ThresholdReport:
    """Return thresholds, decay rates and verdicts of a PinchSpec."""

    n, k, delta, p = spec.n, spec.k, spec.delta, spec.p
    low = low_threshold(n, k, delta)
    high = high_threshold(n, k, delta)
    torsion, torsion_side = torsion_threshold(spec)
    rate_low, rate_high = decay_rates(spec)

    low_side = k < n / p
    high_side = k > n / p
    vanishing_range = None
    if low_side and p < low:
        vanishing_range = CHAIN_LOW
    elif high_side and p > high:
        vanishing_range = CHAIN_HIGH

    torsion_vanishes = torsion_side and p < torsion
    _LOGGER.debug("Thresholds for n='%d' k='%d' delta='%s': low '%s', high '%s'", n, k, delta, low, high)

    return ThresholdReport(
        spec=spec,
        low_threshold=low,
        high_threshold=high,
        torsion_threshold=torsion,
        decay_rate_low=rate_low,
        decay_rate_high=rate_high,
        low_side_condition=low_side,
        high_side_condition=high_side,
        torsion_side_condition=torsion_side,
        verdict=VERDICT_VANISHES_REDUCED if vanishing_range else VERDICT_NOT_COVERED,
        vanishing_range=vanishing_range,
        torsion_verdict=VERDICT_VANISHES_TORSION if torsion_vanishes else VERDICT_NOT_COVERED,
        injectivity=None if spec.q is None else injectivity_check(spec),
    )


def comparison_box(delta: float, r: float) -> tuple[float, float]:
    """Return (δcoth(δr), coth(r)); δ = 0 gives the limit 1/r."""

    if r <= 0:
        raise ExponentError("pinch_range", detail=f"radius {r} must be positive")
    if not 0 <= delta <= 1:
        raise ExponentError("delta_range", delta=delta)
    lower = 1 / r if delta == 0 else delta / math.tanh(delta * r)

    return lower, 1 / math.tanh(r)


def _vertices(n: int, lower: float, upper: float) -> list[list[float]]:
    # The objective is symmetric in the tangential directions, so m upper entries suffice
    return [[upper] * m + [lower] * (n - 1 - m) for m in range(n)]


def _close_enough(value: float, bound: float) -> bool:
    return value >= bound - 1e-9 * max(1.0, abs(bound))


def wp_pointwise_bound_check(n: int, k: int, p: float, delta: float, r: float) -> BoundCheck:
    """Compare min of Σ_a λ_a(1/p - |e*(ω^a)h|²) with the low-range bound."""

    check_exponent(p)
    if not p < n / k:
        raise ExponentError("pinch_range", detail=f"low range needs p < n/k, got p={p}, n/k={n / k}")
    lower, upper = comparison_box(delta, r)

    # Radial direction last, with eigenvalue 0
    best = None
    for vertex in _vertices(n, lower, upper):
        extremes = weight_extremes([*vertex, 0.0], k)
        value = sum(vertex) / p - extremes.maximum
        if best is None or value < best[0]:
            best = (value, tuple(vertex), extremes.argmax)
    exact_min, vertex, subset = best

    stated_bound = (k / p) * upper * (delta * (n - k - 1) / k + 1 - p)
    # Line before the last, minimized over the size of the set J
    intermediate = min(
        lower * ((n - 1) / p - k) + (upper - lower) * (j / p - min(j, k)) for j in range(n)
    )

    return BoundCheck(
        cell=PinchCell(n, k, p, delta, r),
        chain=CHAIN_LOW,
        exact_min=exact_min,
        stated_bound=stated_bound,
        intermediate_bound=intermediate,
        argmin_vertex=vertex,
        argmin_subset=subset,
        ok=_close_enough(exact_min, intermediate) and _close_enough(intermediate, stated_bound),
    )


def wp_pointwise_bound_check_high(n: int, k: int, p: float, delta: float, r: float) -> BoundCheck:
    """Compare min of Σ_a λ_a(|e*(ω^a)h|² - 1/p) with the high-range bound."""

    check_exponent(p)
    if not p > n / k:
        raise ExponentError("pinch_range", detail=f"high range needs p > n/k, got p={p}, n/k={n / k}")
    lower, upper = comparison_box(delta, r)

    best = None
    for vertex in _vertices(n, lower, upper):
        extremes = weight_extremes([*vertex, 0.0], k)
        value = extremes.minimum - sum(vertex) / p
        if best is None or value < best[0]:
            best = (value, tuple(vertex), extremes.argmin)
    exact_min, vertex, subset = best

    stated_bound = upper * (n - k) * (p - 1) / p * (delta * (k - 1) / (n - k) - 1 / (p - 1))

    return BoundCheck(
        cell=PinchCell(n, k, p, delta, r),
        chain=CHAIN_HIGH,
        exact_min=exact_min,
        stated_bound=stated_bound,
        intermediate_bound=None,
        argmin_vertex=vertex,
        argmin_subset=subset,
        ok=_close_enough(exact_min, stated_bound),
    )


def chain_objective(check: BoundCheck, eigenvalues: np.ndarray, h: FormVector) -> float:
    """Return the chain objective at Hessian eigenvalues and a unit form h."""

    cell = check.cell
    weights = np.append(eigenvalues, 0.0)
    value = quadratic_form(weights, h) / h.norm() ** 2
    total = float(np.sum(eigenvalues)) / cell.p

    return total - value if check.chain == CHAIN_LOW else value - total


def sampled_minimum(check: BoundCheck, samples: int, rng: np.random.Generator) -> float:
    """Return min of the chain objective over random eigenvalues and random forms."""

    cell = check.cell
    lower, upper = comparison_box(cell.delta, cell.r)
    frame = Frame.standard(cell.n)
    size = math.comb(cell.n, cell.k)

    best = INF
    for _ in range(samples):
        eigenvalues = rng.uniform(lower, upper, cell.n - 1)
        h = FormVector(frame, cell.k, rng.standard_normal(size))
        best = min(best, chain_objective(check, eigenvalues, h))

    return best


def argmin_objective(check: BoundCheck) -> float:
    """Return the chain objective evaluated at the reported vertex and monomial."""

    h = FormVector.monomial(Frame.standard(check.cell.n), *check.argmin_subset)
    return chain_objective(check, np.asarray(check.argmin_vertex), h)


def pinch_grid(config: dict) -> list[PinchCell]:
    """Return sweep grid cells for dimensions 2..n_max and every degree 1..n-1."""

    grid = config["grid"]
    return [
        PinchCell(n, k, p, delta, r)
        for n in range(2, grid["n_max"] + 1)
        for k in range(1, n)
        for p, delta, r in product(grid["p_values"], grid["delta_values"], grid["r_values"])
    ]


def sweep_bound_checks(cells: list[PinchCell]) -> list[BoundCheck]:
    """Run the low chain where p < n/k and the high chain where p > n/k."""

    checks = []
    for cell in cells:
        if cell.p < cell.n / cell.k:
            checks.append(wp_pointwise_bound_check(cell.n, cell.k, cell.p, cell.delta, cell.r))
        elif cell.p > cell.n / cell.k:
            checks.append(wp_pointwise_bound_check_high(cell.n, cell.k, cell.p, cell.delta, cell.r))

    failed = [check for check in checks if not check.ok]
    if failed:
        _LOGGER.warning("Pointwise bound failed on '%d' of '%d' grid cells!", len(failed), len(checks))
    _LOGGER.info("Checked '%d' pointwise bounds", len(checks))

    return checks

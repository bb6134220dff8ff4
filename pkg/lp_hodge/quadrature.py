"""Sphere and radial quadrature."""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass
from functools import cache
import logging
import math

import numpy as np
from scipy import special

from .const import (
    DEFAULT_GAUSS_NODES,
    DEFAULT_N_MC,
    DEFAULT_RADIAL_NODES_PER_UNIT,
    DEFAULT_SCHEME,
    DEFAULT_SEED,
    PRODUCT_GAUSS_MAX_DIMENSION,
    SCHEME_AUTO,
    SCHEME_MONTE_CARLO,
    SCHEME_PRODUCT_GAUSS,
)

_LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True)
class QuadratureSpec:
    """Radial and sphere quadrature settings."""

    gauss_nodes: int = DEFAULT_GAUSS_NODES
    radial_nodes_per_unit: int = DEFAULT_RADIAL_NODES_PER_UNIT
    n_mc: int = DEFAULT_N_MC
    seed: int = DEFAULT_SEED
    scheme: str = DEFAULT_SCHEME

    @classmethod
    def from_config(cls, config: dict) -> QuadratureSpec:
        """Return spec from the quadrature section of a validated config."""

        return cls(**config["quadrature"])

    def sphere_scheme(self, n: int) -> str:
        """Return scheme used on S^{n-1}."""

        if self.scheme != SCHEME_AUTO:
            return self.scheme
        return SCHEME_PRODUCT_GAUSS if n <= PRODUCT_GAUSS_MAX_DIMENSION else SCHEME_MONTE_CARLO


@dataclass(frozen=True)
class SphereAverage:
    """Normalized sphere average with its standard error."""

    value: float
    stderr: float


def sphere_area(n: int) -> float:
    """Return area ω_{n-1} of the unit sphere S^{n-1} in R^n."""

    return float(2 * math.pi ** (n / 2) / special.gamma(n / 2))


@cache
def _product_gauss_nodes(n: int, nodes: int) -> tuple[np.ndarray, np.ndarray]:
    # Polar angle φ_j carries weight sin^{n-1-j}; t = cos φ_j is Gauss-Gegenbauer with α = m/2
    polar = []
    for j in range(1, n - 1):
        t, w = special.roots_gegenbauer(nodes, (n - 1 - j) / 2)
        polar.append((t, w))
    azimuth = 2 * math.pi * np.arange(2 * nodes) / (2 * nodes)

    grids = np.meshgrid(*[t for t, _ in polar], azimuth, indexing="ij")
    weight_grids = np.meshgrid(*[w for _, w in polar], np.ones_like(azimuth), indexing="ij")

    cosines = [grid.ravel() for grid in grids[:-1]]
    psi = grids[-1].ravel()
    weights = np.prod([grid.ravel() for grid in weight_grids], axis=0)

    directions = np.empty((psi.size, n))
    sines = np.ones(psi.size)
    for index, cosine in enumerate(cosines):
        directions[:, index] = sines * cosine
        sines = sines * np.sqrt(np.clip(1 - cosine**2, 0, None))
    directions[:, n - 2] = sines * np.cos(psi)
    directions[:, n - 1] = sines * np.sin(psi)

    directions.setflags(write=False)
    weights = weights / weights.sum()
    weights.setflags(write=False)

    return directions, weights


@cache
def _warn_monte_carlo(n: int) -> None:
    _LOGGER.warning("Product Gauss rule unavailable for n='%d', using Monte Carlo sphere quadrature!", n)


@cache
def _monte_carlo_nodes(n: int, samples: int, seed: int) -> tuple[np.ndarray, np.ndarray]:
    rng = np.random.default_rng(seed)
    directions = rng.standard_normal((samples, n))
    directions /= np.linalg.norm(directions, axis=1, keepdims=True)
    directions.setflags(write=False)
    weights = np.full(samples, 1 / samples)
    weights.setflags(write=False)

    return directions, weights


def sphere_nodes(n: int, quad: QuadratureSpec) -> tuple[np.ndarray, np.ndarray, str]:
    """Return unit directions, normalized weights and scheme name for S^{n-1}."""

    scheme = quad.sphere_scheme(n)
    if scheme == SCHEME_PRODUCT_GAUSS:
        directions, weights = _product_gauss_nodes(n, quad.gauss_nodes)
    else:
        if quad.scheme == SCHEME_AUTO:
            _warn_monte_carlo(n)
        directions, weights = _monte_carlo_nodes(n, quad.n_mc, quad.seed)

    return directions, weights, scheme


def weighted_mean(values: np.ndarray, weights: np.ndarray, scheme: str) -> SphereAverage:
    """Return weighted mean; standard error only for Monte Carlo nodes."""

    value = float(weights @ values)
    if scheme != SCHEME_MONTE_CARLO:
        return SphereAverage(value, 0.0)

    return SphereAverage(value, float(np.std(values, ddof=1) / math.sqrt(values.size)))


def weighted_ratio(numerator: np.ndarray, denominator: np.ndarray, weights: np.ndarray, scheme: str) -> SphereAverage:
    """Return ratio of weighted means with its delta-method standard error."""

    top = float(weights @ numerator)
    bottom = float(weights @ denominator)
    ratio = top / bottom
    if scheme != SCHEME_MONTE_CARLO:
        return SphereAverage(ratio, 0.0)

    residual = numerator - ratio * denominator
    return SphereAverage(ratio, float(np.std(residual, ddof=1) / (math.sqrt(residual.size) * abs(bottom))))


def sphere_average(function: Callable[[np.ndarray], np.ndarray], n: int, quad: QuadratureSpec) -> SphereAverage:
    """Return normalized average of a function of unit directions over S^{n-1}."""

    directions, weights, scheme = sphere_nodes(n, quad)
    return weighted_mean(np.asarray(function(directions), dtype=float), weights, scheme)


@cache
def _legendre(count: int) -> tuple[np.ndarray, np.ndarray]:
    return np.polynomial.legendre.leggauss(count)


def radial_nodes(start: float, stop: float, quad: QuadratureSpec) -> tuple[np.ndarray, np.ndarray]:
    """Return Gauss-Legendre nodes and weights on [start, stop]."""

    count = max(8, math.ceil((stop - start) * quad.radial_nodes_per_unit))
    x, w = _legendre(count)
    half = (stop - start) / 2

    return start + half * (x + 1), half * w


def radial_integral(function: Callable[[float], float], start: float, stop: float, quad: QuadratureSpec) -> float:
    """Return ∫_start^stop function(r) dr."""

    if stop <= start:
        return 0.0
    nodes, weights = radial_nodes(start, stop, quad)

    return float(sum(weight * function(float(r)) for r, weight in zip(nodes, weights, strict=True)))

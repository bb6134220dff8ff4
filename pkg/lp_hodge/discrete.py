"""Finite weighted cochain complexes and their L_p-minimal primitives and representatives.

Both solvers minimize the weighted energy Σ W_i|x_i|^p over an affine set x = a + M·y.
For a primitive of z, a is the weighted minimum-norm solution of dβ = z and M spans
ker d; for a representative of the class of z, a = z and M spans the image of d.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
import json
import logging
import math
from pathlib import Path
from typing import Any

import networkx as nx
import numpy as np
from scipy import linalg, optimize, sparse

from .const import (
    DEFAULT_EPS_FACTOR,
    DEFAULT_EPS_START,
    DEFAULT_EPS_STOP,
    DEFAULT_MAX_ITER,
    DEFAULT_SEED,
    DEFAULT_TOL_GRAD,
    DEFAULT_TOL_UNIQ,
)
from .exceptions import ComplexError, NotClosedError, NotExactError, SolverError
from .types import CochainJson, ComplexJson
from .utils import check_exponent

_LOGGER = logging.getLogger(__name__)

RANK_TOLERANCE = 1e-10
MEMBERSHIP_TOLERANCE = 1e-8
ARMIJO = 1e-4
RESOLUTION = 1e-10
MIN_STEP = 1e-12


@dataclass(frozen=True)
class Cochain:
    """Degree and coefficients of a cochain."""

    degree: int
    coeffs: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        """Freeze coefficients."""

        coeffs = np.array(self.coeffs, dtype=float).ravel()
        coeffs.setflags(write=False)
        object.__setattr__(self, "coeffs", coeffs)

    def __len__(self) -> int:
        """Return number of cells."""

        return self.coeffs.size


class CochainComplex:
    """Cochain complex with sparse differentials and positive diagonal cell weights."""

    def __init__(self, dims: list[int], d: list[sparse.csr_matrix], weights: list[np.ndarray] | None = None) -> None:
        """Initialize complex; d[k] maps degree k to degree k + 1."""

        self.dims = [int(dim) for dim in dims]
        if weights is None:
            weights = [np.ones(dim) for dim in self.dims]
        self.weights = [np.asarray(weight, dtype=float) for weight in weights]
        self.d_maps = [sparse.csr_matrix(matrix, dtype=float) for matrix in d]

    @property
    def top_degree(self) -> int:
        """Return highest degree N."""

        return len(self.dims) - 1

    def validate(self) -> None:
        """Raise ComplexError unless shapes match, weights are positive and d∘d = 0."""

        if not self.dims:
            raise ComplexError("invalid_complex", detail="no degrees")
        if len(self.d_maps) != self.top_degree:
            raise ComplexError("invalid_complex", detail=f"expected {self.top_degree} differentials")
        if len(self.weights) != len(self.dims):
            raise ComplexError("invalid_complex", detail=f"expected {len(self.dims)} weight vectors")

        for k, weight in enumerate(self.weights):
            if weight.shape != (self.dims[k],):
                raise ComplexError("invalid_complex", detail=f"weights of degree {k} must have length {self.dims[k]}")
            if np.any(weight <= 0):
                index = int(np.argmin(weight))
                raise ComplexError("invalid_complex", detail=f"weight {weight[index]} of cell {index} in degree {k}")

        for k, matrix in enumerate(self.d_maps):
            if matrix.shape != (self.dims[k + 1], self.dims[k]):
                expected = (self.dims[k + 1], self.dims[k])
                raise ComplexError("invalid_complex", detail=f"d{k} has shape {matrix.shape}, expected {expected}")

        # Validate d∘d = 0 entrywise
        for k in range(self.top_degree - 1):
            product = (self.d_maps[k + 1] @ self.d_maps[k]).tocoo()
            for row, col, value in zip(product.row, product.col, product.data, strict=True):
                if value != 0:
                    raise ComplexError("invalid_complex", detail=f"d{k + 1}∘d{k} has entry {value} at ({row}, {col})")

    def d(self, k: int) -> sparse.csr_matrix:
        """Return d_k, a zero map outside 0..N-1."""

        if 0 <= k < self.top_degree:
            return self.d_maps[k]
        rows = self.dims[k + 1] if 0 <= k + 1 <= self.top_degree else 0
        cols = self.dims[k] if 0 <= k <= self.top_degree else 0

        return sparse.csr_matrix((rows, cols))

    def dstar(self, k: int) -> sparse.csr_matrix:
        """Return d*_k = W_k^{-1} d_k^T W_{k+1} from degree k + 1 to degree k."""

        matrix = self.d(k)
        left = sparse.diags(1 / self.weight(k)) if matrix.shape[1] else sparse.csr_matrix((0, 0))
        right = sparse.diags(self.weight(k + 1)) if matrix.shape[0] else sparse.csr_matrix((0, 0))

        return (left @ matrix.T @ right).tocsr()

    def weight(self, k: int) -> np.ndarray:
        """Return cell weights of degree k, empty outside 0..N."""

        if 0 <= k <= self.top_degree:
            return self.weights[k]
        return np.ones(0)

    def check_cochain(self, cochain: Cochain) -> None:
        """Raise ComplexError unless the cochain fits a degree of this complex."""

        if not 0 <= cochain.degree <= self.top_degree or len(cochain) != self.dims[cochain.degree]:
            raise ComplexError(
                "invalid_complex", detail=f"cochain of degree {cochain.degree} with {len(cochain)} coefficients"
            )

    def apply_d(self, cochain: Cochain) -> Cochain:
        """Return dc."""

        self.check_cochain(cochain)
        return Cochain(cochain.degree + 1, self.d(cochain.degree) @ cochain.coeffs)

    def dstar_apply(self, cochain: Cochain) -> Cochain:
        """Return d*c."""

        self.check_cochain(cochain)
        return Cochain(cochain.degree - 1, self.dstar(cochain.degree - 1) @ cochain.coeffs)

    def inner(self, a: Cochain, b: Cochain) -> float:
        """Return W-weighted inner product."""

        self.check_cochain(a)
        self.check_cochain(b)
        if a.degree != b.degree:
            raise ComplexError("invalid_complex", detail=f"degrees {a.degree} and {b.degree} differ")

        return float(np.sum(self.weights[a.degree] * a.coeffs * b.coeffs))

    def lp_norm(self, cochain: Cochain, p: float) -> float:
        """Return weighted L_p norm."""

        self.check_cochain(cochain)
        return lp_norm(cochain, p, self.weights[cochain.degree])


@dataclass(frozen=True)
class SolverConfig:
    """Exponent, tolerances and smoothing schedule of the convex solvers."""

    p: float
    tol_grad: float = DEFAULT_TOL_GRAD
    tol_uniq: float = DEFAULT_TOL_UNIQ
    max_iter: int = DEFAULT_MAX_ITER
    eps_start: float = DEFAULT_EPS_START
    eps_stop: float = DEFAULT_EPS_STOP
    eps_factor: float = DEFAULT_EPS_FACTOR

    def __post_init__(self) -> None:
        """Validate exponent."""

        check_exponent(self.p)

    @classmethod
    def from_config(cls, config: dict, p: float) -> SolverConfig:
        """Return solver config from the solver section of a validated config."""

        return cls(p=float(p), **config["solver"])

    def schedule(self) -> list[float]:
        """Return geometric smoothing schedule from eps_start down to eps_stop."""

        steps = math.ceil(math.log(self.eps_stop / self.eps_start) / math.log(self.eps_factor) - 1e-9)
        return [self.eps_start * self.eps_factor**step for step in range(steps)] + [self.eps_stop]


@dataclass(frozen=True)
class HodgeResult:
    """Outcome of a primitive or representative solve."""

    degree: int
    p: float
    representative: Cochain | None
    primitive: Cochain | None
    energy: float
    residual: float
    dstar_residual: float
    iterations: int
    energy_gap: float
    energies: tuple[float, ...] = field(repr=False)
    offset: np.ndarray = field(repr=False)
    directions: np.ndarray = field(repr=False)
    weights: np.ndarray = field(repr=False)
    norm_ratio: float | None = None

    @property
    def solution(self) -> Cochain:
        """Return the minimized cochain."""

        return self.representative if self.representative is not None else self.primitive

    def as_dict(self) -> dict[str, Any]:
        """Return JSON friendly form."""

        return {
            "degree": self.degree,
            "p": self.p,
            "representative": None if self.representative is None else self.representative.coeffs,
            "primitive": None if self.primitive is None else self.primitive.coeffs,
            "energy": self.energy,
            "residual": self.residual,
            "dstar_residual": self.dstar_residual,
            "iterations": self.iterations,
            "energy_gap": self.energy_gap,
            "norm_ratio": self.norm_ratio,
        }


@dataclass(frozen=True)
class DualityCheck:
    """Dual cochain f = |h|^{p-2}h and its checks."""

    dual: Cochain
    dstar_residual: float
    roundtrip_residual: float
    norm_p: float
    norm_conjugate: float
    ok: bool


@dataclass(frozen=True)
class TorsionReport:
    """Rank bookkeeping of one degree."""

    degree: int
    kernel_dimension: int
    image_rank: int
    betti: int
    ok: bool = True


def lp_norm(cochain: Cochain, p: float, weights: np.ndarray) -> float:
    """Return (Σ W_i|c_i|^p)^{1/p}."""

    check_exponent(p)
    if weights.shape != cochain.coeffs.shape:
        raise ComplexError("invalid_complex", detail="weights and coefficients differ in length")

    return float(np.sum(weights * np.abs(cochain.coeffs) ** p) ** (1 / p))


def pointwise_dual(values: np.ndarray, p: float) -> np.ndarray:
    """Return |x|^{p-2}x entrywise, zero where x = 0."""

    return np.sign(values) * np.abs(values) ** (p - 1)


def _energy(x: np.ndarray, weights: np.ndarray, p: float, eps: float) -> float:
    return float(np.sum(weights * (x**2 + eps**2) ** (p / 2)))


def _gradient(x: np.ndarray, weights: np.ndarray, p: float, eps: float) -> np.ndarray:
    if eps == 0:
        return weights * p * pointwise_dual(x, p)
    return weights * p * x * (x**2 + eps**2) ** (p / 2 - 1)


def _curvature(x: np.ndarray, weights: np.ndarray, p: float, eps: float) -> np.ndarray:
    base = x**2 + eps**2
    with np.errstate(divide="ignore", invalid="ignore"):
        values = weights * p * base ** (p / 2 - 2) * ((p - 1) * x**2 + eps**2)

    return np.nan_to_num(values, nan=0.0, posinf=0.0)


@dataclass
class _Minimizer:
    """Damped Newton with ε-continuation on Σ W|a + M y|_ε^p."""

    offset: np.ndarray
    directions: np.ndarray
    weights: np.ndarray
    config: SolverConfig
    iterations: int = 0
    energies: list[float] = field(default_factory=list)
    _warned: bool = False

    def point(self, y: np.ndarray) -> np.ndarray:
        return self.offset + self.directions @ y

    def reduced_gradient(self, y: np.ndarray, eps: float) -> np.ndarray:
        return self.directions.T @ _gradient(self.point(y), self.weights, self.config.p, eps)

    def _newton_direction(self, y: np.ndarray, gradient: np.ndarray, eps: float) -> np.ndarray:
        curvature = _curvature(self.point(y), self.weights, self.config.p, eps)
        hessian = self.directions.T @ (curvature[:, None] * self.directions)
        step, *_ = np.linalg.lstsq(hessian, -gradient, rcond=None)

        return step

    def gradient_scale(self, x: np.ndarray) -> float:
        """Return size of the terms W|x|^{p-1} the reduced gradient is summed from, at least 1."""

        return max(1.0, float(np.max(self.weights * np.abs(x) ** (self.config.p - 1), initial=0.0)))

    def _line_search(self, y: np.ndarray, step: np.ndarray, gradient: np.ndarray, eps: float) -> float | None:
        """Return backtracked step length, None when no length is accepted."""

        p, weights = self.config.p, self.weights
        energy = _energy(self.point(y), weights, p, eps)
        slope = float(gradient @ step)

        # Predicted decrease below rounding of the energy: accept lengths that shrink the reduced gradient
        flat = abs(slope) <= RESOLUTION * max(energy, 1.0)
        norm = float(np.linalg.norm(gradient))

        t = 1.0
        while t > MIN_STEP:
            trial = y + t * step
            if flat:
                if float(np.linalg.norm(self.reduced_gradient(trial, eps))) < norm:
                    return t
            elif _energy(self.point(trial), weights, p, eps) <= energy + ARMIJO * t * slope:
                return t
            t /= 2

        return None

    def stage(self, y: np.ndarray, eps: float, tolerance: float) -> np.ndarray:
        """Run damped Newton at fixed smoothing until the reduced gradient is below tolerance."""

        p = self.config.p
        for _ in range(self.config.max_iter):
            gradient = self.reduced_gradient(y, eps)
            if np.max(np.abs(gradient), initial=0.0) <= tolerance:
                break
            self.iterations += 1

            # Damped Newton step
            step = self._newton_direction(y, gradient, eps)
            t = self._line_search(y, step, gradient, eps) if gradient @ step < 0 else None
            if t is None:
                if not self._warned:
                    _LOGGER.warning("Newton step failed at eps '%s', falling back to gradient descent!", eps)
                    self._warned = True
                step = -gradient
                t = self._line_search(y, step, gradient, eps)
                if t is None:
                    # Energy no longer decreases in floating point
                    break

            # Stop on steps below floating point resolution of y
            y = y + t * step
            self.energies.append(_energy(self.point(y), self.weights, p, eps))
            if np.max(np.abs(t * step), initial=0.0) <= 1e-16 * (1 + np.max(np.abs(y), initial=0.0)):
                break

        return y

    def solve(self, y: np.ndarray) -> tuple[np.ndarray, float]:
        """Return minimizing reduced coordinates and the energy gap of the last two stages."""

        config = self.config
        scale = float(np.max(np.abs(self.point(y)), initial=0.0))
        if self.directions.shape[1] == 0 or scale == 0:
            return y, 0.0

        stage_energies = []
        for eps in config.schedule():
            _LOGGER.debug("Continuation step at eps '%s' after '%d' iterations", eps, self.iterations)
            tolerance = max(config.tol_grad * self.gradient_scale(self.point(y)), eps * scale ** (config.p - 1))
            y = self.stage(y, eps * scale, tolerance)
            stage_energies.append(_energy(self.point(y), self.weights, config.p, 0.0))

        # Polish on the unsmoothed energy where its Hessian stays finite
        if config.p >= 2:
            y = self.stage(y, 0.0, config.tol_grad * self.gradient_scale(self.point(y)))
            stage_energies.append(_energy(self.point(y), self.weights, config.p, 0.0))

        gap = abs(stage_energies[-1] - stage_energies[-2]) if len(stage_energies) > 1 else 0.0

        return y, gap


def _dense(matrix: sparse.spmatrix) -> np.ndarray:
    return np.asarray(matrix.toarray(), dtype=float)


def _weighted_min_norm(matrix: np.ndarray, rhs: np.ndarray, weights: np.ndarray) -> np.ndarray:
    """Return the W-minimum-norm least-squares solution of matrix·x = rhs."""

    if matrix.shape[0] == 0 or matrix.shape[1] == 0:
        return np.zeros(matrix.shape[1])
    root = 1 / np.sqrt(weights)
    solution, *_ = np.linalg.lstsq(matrix * root, rhs, rcond=RANK_TOLERANCE)

    return root * solution


def _kernel_basis(matrix: np.ndarray) -> np.ndarray:
    if matrix.shape[1] == 0:
        return np.zeros((0, 0))
    if matrix.shape[0] == 0:
        return np.eye(matrix.shape[1])
    return linalg.null_space(matrix, rcond=RANK_TOLERANCE)


def _image_basis(matrix: np.ndarray) -> np.ndarray:
    if matrix.size == 0 or not np.any(matrix):
        return np.zeros((matrix.shape[0], 0))
    return linalg.orth(matrix, rcond=RANK_TOLERANCE)


def _relative(residual: float, scale: float) -> float:
    return residual / max(1.0, scale)


def _finish(
    complex_: CochainComplex,
    minimizer: _Minimizer,
    y: np.ndarray,
    gap: float,
    degree: int,
    dstar_degree: int,
) -> tuple[np.ndarray, float, float]:
    """Return solution, reduced EL residual and d* residual, raising on non-convergence."""

    config = minimizer.config
    x = minimizer.point(y)
    dual = minimizer.weights * pointwise_dual(x, config.p)
    residual = float(np.max(np.abs(minimizer.directions.T @ dual), initial=0.0))
    dstar = complex_.dstar(dstar_degree) @ (dual / minimizer.weights)
    dstar_residual = float(np.max(np.abs(dstar), initial=0.0))

    # Validate EL residual relative to the size of its terms
    tolerance = config.tol_grad * minimizer.gradient_scale(x)
    if residual > tolerance:
        scale = float(np.max(np.abs(x), initial=0.0))
        vanishing = np.abs(x) <= math.sqrt(config.eps_stop) * max(scale, 1.0)
        if config.p < 2 and np.any(vanishing):
            # |x|^{p-1} resolves vanishing entries only to about eps^{p-1}
            _LOGGER.warning(
                "EL residual '%s' of degree '%d' solve is limited by '%d' vanishing entries!",
                residual,
                degree,
                int(np.sum(vanishing)),
            )
        else:
            raise SolverError("no_convergence", iterations=minimizer.iterations, residual=residual)

    _LOGGER.debug("Energy gap of last continuation steps '%s'", gap)

    return x, residual, dstar_residual


def pcoclosed_primitive(
    complex_: CochainComplex, z: Cochain, config: SolverConfig, initial: np.ndarray | None = None
) -> HodgeResult:
    """Return the L_p-minimal β with dβ = z.

    The minimizer is characterized by |β|^{p-2}β being W-orthogonal to ker d, which
    contains the condition d*(|β|^{p-2}β) = 0.
    """

    complex_.check_cochain(z)
    k = z.degree
    if k == 0:
        raise NotExactError("not_exact", k=k, residual=float(np.max(np.abs(z.coeffs), initial=0.0)))
    _LOGGER.debug("Solving p-coclosed primitive for degree '%d'", k)

    d = _dense(complex_.d(k - 1))
    weights = complex_.weights[k - 1]
    offset = _weighted_min_norm(d, z.coeffs, weights)

    # Validate exactness
    residual = float(np.max(np.abs(d @ offset - z.coeffs), initial=0.0))
    if _relative(residual, float(np.max(np.abs(z.coeffs), initial=0.0))) > MEMBERSHIP_TOLERANCE:
        raise NotExactError("not_exact", k=k, residual=residual)

    # Minimize over offset + ker d
    directions = _kernel_basis(d)
    minimizer = _Minimizer(offset, directions, weights, config)
    start = np.zeros(directions.shape[1]) if initial is None else np.asarray(initial, dtype=float)
    y, gap = minimizer.solve(start)
    beta, el_residual, dstar_residual = _finish(complex_, minimizer, y, gap, k - 1, k - 2)

    _LOGGER.info("Primitive of degree '%d' found after '%d' iterations", k, minimizer.iterations)

    return HodgeResult(
        degree=k - 1,
        p=config.p,
        representative=None,
        primitive=Cochain(k - 1, beta),
        energy=float(np.sum(weights * np.abs(beta) ** config.p)),
        residual=el_residual,
        dstar_residual=dstar_residual,
        iterations=minimizer.iterations,
        energy_gap=gap,
        energies=tuple(minimizer.energies),
        offset=offset,
        directions=directions,
        weights=weights,
    )


def pharmonic_representative(
    complex_: CochainComplex, z: Cochain, config: SolverConfig, initial: np.ndarray | None = None
) -> HodgeResult:
    """Return the L_p-minimal h = z - dβ in the class of a closed cochain z.

    The solve starts from the W-orthogonal (p = 2) representative.
    """

    complex_.check_cochain(z)
    k = z.degree
    _LOGGER.debug("Solving p-harmonic representative for degree '%d'", k)

    # Validate closedness
    closure = float(np.max(np.abs(complex_.d(k) @ z.coeffs), initial=0.0))
    if _relative(closure, float(np.max(np.abs(z.coeffs), initial=0.0))) > MEMBERSHIP_TOLERANCE:
        raise NotClosedError("not_closed", k=k, residual=closure)

    # Minimize over z + im d starting from the W-orthogonal representative
    d = _dense(complex_.d(k - 1))
    weights = complex_.weights[k]
    directions = _image_basis(d)
    if initial is None and directions.shape[1] == 0:
        start = np.zeros(0)
    elif initial is None:
        root = np.sqrt(weights)
        start, *_ = np.linalg.lstsq(root[:, None] * directions, -root * z.coeffs, rcond=None)
    else:
        start = np.asarray(initial, dtype=float)

    minimizer = _Minimizer(z.coeffs.copy(), directions, weights, config)
    y, gap = minimizer.solve(start)
    h, el_residual, dstar_residual = _finish(complex_, minimizer, y, gap, k, k - 1)

    # Recover a primitive of z - h
    beta = _weighted_min_norm(d, z.coeffs - h, complex_.weights[k - 1]) if k > 0 else np.zeros(0)
    norm_h = lp_norm(Cochain(k, h), config.p, weights)
    norm_z = lp_norm(z, config.p, weights)

    _LOGGER.info("Representative of degree '%d' found after '%d' iterations", k, minimizer.iterations)

    return HodgeResult(
        degree=k,
        p=config.p,
        representative=Cochain(k, h),
        primitive=Cochain(k - 1, beta) if k > 0 else None,
        energy=float(np.sum(weights * np.abs(h) ** config.p)),
        residual=el_residual,
        dstar_residual=dstar_residual,
        iterations=minimizer.iterations,
        energy_gap=gap,
        energies=tuple(minimizer.energies),
        offset=z.coeffs,
        directions=directions,
        weights=weights,
        norm_ratio=norm_h / norm_z if norm_z > 0 else None,
    )


def norm_minimality(result: HodgeResult, z: Cochain, tolerance: float = 1e-12) -> bool:
    """Return whether ‖h‖_p ≤ ‖z‖_p, with equality only when h = z."""

    h = result.representative
    norm_h = lp_norm(h, result.p, result.weights)
    norm_z = lp_norm(z, result.p, result.weights)
    if norm_h > norm_z * (1 + tolerance) + tolerance:
        return False
    if abs(norm_h - norm_z) <= tolerance * max(1.0, norm_z):
        return bool(np.allclose(h.coeffs, z.coeffs, atol=1e-6))

    return True


def _solve(
    complex_: CochainComplex, z: Cochain, config: SolverConfig, representative: bool, initial: np.ndarray | None
) -> HodgeResult:
    if representative:
        return pharmonic_representative(complex_, z, config, initial)
    return pcoclosed_primitive(complex_, z, config, initial)


def uniqueness_probe(
    complex_: CochainComplex,
    z: Cochain,
    config: SolverConfig,
    trials: int = 10,
    representative: bool = True,
    seed: int = DEFAULT_SEED,
) -> float:
    """Return largest pairwise distance between minimizers from random initializations."""

    rng = np.random.default_rng(seed)
    reference = _solve(complex_, z, config, representative, None)
    scale = 1.0 + float(np.max(np.abs(reference.solution.coeffs), initial=0.0))
    width = reference.directions.shape[1]

    solutions = [reference.solution.coeffs]
    for _ in range(trials - 1):
        initial = rng.normal(scale=scale, size=width)
        solutions.append(_solve(complex_, z, config, representative, initial).solution.coeffs)

    spread = max((float(np.max(np.abs(a - b), initial=0.0)) for a, b in combinations(solutions, 2)), default=0.0)
    _LOGGER.debug("Uniqueness probe over '%d' trials: spread '%s'", trials, spread)

    return spread


def duality_map_check(complex_: CochainComplex, h: Cochain, p: float, tolerance: float = 1e-8) -> DualityCheck:
    """Return checks of f = |h|^{p-2}h: d*f = 0, |f|^{p'-2}f = h and ‖f‖_{p'}^{p'} = ‖h‖_p^p."""

    complex_.check_cochain(h)
    check_exponent(p)
    conjugate = p / (p - 1)
    weights = complex_.weights[h.degree]

    # Validate d*f = 0 and that the conjugate map inverts f
    dual = pointwise_dual(h.coeffs, p)
    dstar_residual = float(np.max(np.abs(complex_.dstar(h.degree - 1) @ dual), initial=0.0))
    roundtrip = float(np.max(np.abs(pointwise_dual(dual, conjugate) - h.coeffs), initial=0.0))
    norm_p = float(np.sum(weights * np.abs(h.coeffs) ** p))
    norm_conjugate = float(np.sum(weights * np.abs(dual) ** conjugate))

    # Validate norm identity
    ok = (
        dstar_residual <= tolerance
        and roundtrip <= 1e-10 * max(1.0, float(np.max(np.abs(h.coeffs), initial=0.0)))
        and math.isclose(norm_p, norm_conjugate, rel_tol=1e-10, abs_tol=1e-12)
    )

    return DualityCheck(Cochain(h.degree, dual), dstar_residual, roundtrip, norm_p, norm_conjugate, ok)


def torsion_is_zero(complex_: CochainComplex, k: int) -> TorsionReport:
    """Return dim H^k = dim ker d_k - rank d_{k-1}; the image of d is always closed here."""

    if not 0 <= k <= complex_.top_degree:
        raise ComplexError("invalid_complex", detail=f"degree {k} outside 0..{complex_.top_degree}")

    def rank(matrix: sparse.spmatrix) -> int:
        dense = _dense(matrix)
        return int(np.linalg.matrix_rank(dense, tol=RANK_TOLERANCE)) if dense.size else 0

    kernel = complex_.dims[k] - rank(complex_.d(k))
    image = rank(complex_.d(k - 1))

    return TorsionReport(degree=k, kernel_dimension=kernel, image_rank=image, betti=kernel - image)


def minimality_certificate(result: HodgeResult, trials: int = 100, seed: int = DEFAULT_SEED) -> float:
    """Return min over random feasible perturbations κ of ‖x + κ‖_p - ‖x‖_p."""

    rng = np.random.default_rng(seed)
    x = result.solution.coeffs
    width = result.directions.shape[1]
    if width == 0:
        return 0.0

    def norm(values: np.ndarray) -> float:
        return float(np.sum(result.weights * np.abs(values) ** result.p) ** (1 / result.p))

    base = norm(x)
    scale = 1.0 + float(np.max(np.abs(x), initial=0.0))
    worst = math.inf
    for trial in range(trials):
        # Perturbation sizes range over several decades
        size = scale * 10.0 ** -(trial % 8)
        kappa = result.directions @ rng.normal(size=width)
        kappa *= size / max(float(np.max(np.abs(kappa))), 1e-300)
        worst = min(worst, norm(x + kappa) - base)

    return worst


def brute_force_minimizer(result: HodgeResult, grid: int = 21) -> np.ndarray:
    """Return minimizer found by a grid search refined with BFGS, for kernels of dimension ≤ 3."""

    width = result.directions.shape[1]
    if width > 3:
        raise ComplexError("invalid_complex", detail=f"brute force needs at most 3 free directions, got {width}")
    if width == 0:
        return np.asarray(result.offset, dtype=float)

    offset, directions, weights, p = result.offset, result.directions, result.weights, result.p

    def energy(y: np.ndarray) -> float:
        return float(np.sum(weights * np.abs(offset + directions @ np.atleast_1d(y)) ** p))

    def gradient(y: np.ndarray) -> np.ndarray:
        return directions.T @ (weights * p * pointwise_dual(offset + directions @ y, p))

    # Coarse grid then BFGS polish
    half = 2 * (float(np.linalg.norm(offset)) + 1)
    start = optimize.brute(energy, [(-half, half)] * width, Ns=grid, finish=None)
    refined = optimize.minimize(
        energy, np.atleast_1d(start), jac=gradient, method="BFGS", options={"gtol": 1e-12, "maxiter": 2000}
    )

    return offset + directions @ refined.x


def scalar_center(values: np.ndarray, weights: np.ndarray, p: float) -> float:
    """Return c minimizing Σ w_i|u_i - c|^p, by bisection on Σ w_i|u_i - c|^{p-2}(u_i - c)."""

    values = np.asarray(values, dtype=float)
    weights = np.asarray(weights, dtype=float)

    def slope(c: float) -> float:
        return float(np.sum(weights * pointwise_dual(values - c, p)))

    low, high = float(values.min()), float(values.max())
    if low == high:
        return low

    return float(optimize.bisect(slope, low, high, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=500))


def graph_complex(graph: nx.Graph) -> CochainComplex:
    """Return 1-dimensional complex of a graph with d_0 the oriented incidence matrix.

    Node and edge attribute 'weight' gives the cell weights, default 1.
    """

    nodes = list(graph.nodes)
    edges = list(graph.edges)
    if edges:
        incidence = nx.incidence_matrix(graph, nodelist=nodes, edgelist=edges, oriented=True)
        d0 = sparse.csr_matrix(incidence.T, dtype=float)
    else:
        d0 = sparse.csr_matrix((0, len(nodes)))

    node_weights = np.array([graph.nodes[node].get("weight", 1.0) for node in nodes], dtype=float)
    edge_weights = np.array([graph.edges[edge].get("weight", 1.0) for edge in edges], dtype=float)
    complex_ = CochainComplex([len(nodes), len(edges)], [d0], [node_weights, edge_weights])
    complex_.validate()

    return complex_


def cycle_complex(length: int) -> CochainComplex:
    """Return complex of the oriented cycle graph C_length."""

    return graph_complex(nx.cycle_graph(length, create_using=nx.DiGraph))


def path_complex(length: int) -> CochainComplex:
    """Return complex of the oriented path graph with length vertices."""

    return graph_complex(nx.path_graph(length, create_using=nx.DiGraph))


def _direct_sum(first: sparse.spmatrix, second: sparse.spmatrix) -> sparse.csr_matrix:
    a, b = sparse.coo_matrix(first), sparse.coo_matrix(second)
    rows = np.concatenate([a.row, b.row + a.shape[0]])
    cols = np.concatenate([a.col, b.col + a.shape[1]])
    shape = (a.shape[0] + b.shape[0], a.shape[1] + b.shape[1])

    return sparse.coo_matrix((np.concatenate([a.data, b.data]), (rows, cols)), shape=shape).tocsr()


def disjoint_union(first: CochainComplex, second: CochainComplex) -> CochainComplex:
    """Return degreewise direct sum of two complexes."""

    top = max(first.top_degree, second.top_degree)

    def dim(complex_: CochainComplex, k: int) -> int:
        return complex_.dims[k] if k <= complex_.top_degree else 0

    union = CochainComplex(
        [dim(first, k) + dim(second, k) for k in range(top + 1)],
        [_direct_sum(first.d(k), second.d(k)) for k in range(top)],
        [np.concatenate([first.weight(k), second.weight(k)]) for k in range(top + 1)],
    )
    union.validate()

    return union


def complex_from_json(data: ComplexJson) -> CochainComplex:
    """Return validated complex from its JSON form."""

    try:
        dims = [int(dim) for dim in data["dims"]]
        d = [sparse.csr_matrix((dims[k + 1], dims[k])) for k in range(len(dims) - 1)]
        for entry in data.get("d", []):
            k = int(entry["k"])
            if not 0 <= k < len(d):
                raise IndexError(f"differential degree {k} outside 0..{len(d) - 1}")
            d[k] =sparse.coo_matrix(
                (entry["vals"], (entry["rows"], entry["cols"])), shape=(dims[k + 1], dims[k])
            ).tocsr()
        weights = [np.asarray(weight, dtype=float) for weight in data["weights"]] if "weights" in data else None
    except (KeyError, IndexError, TypeError, ValueError) as ex:
        raise ComplexError("invalid_complex", detail=f"malformed complex JSON: {ex}") from ex

    complex_ = CochainComplex(dims, d, weights)
    complex_.validate()

    return complex_


def complex_to_json(complex_: CochainComplex) -> ComplexJson:
    """Return JSON form of a complex."""

    entries = []
    for k, matrix in enumerate(complex_.d_maps):
        coo = matrix.tocoo()
        entries.append({"k": k, "rows": coo.row.tolist(), "cols": coo.col.tolist(), "vals": coo.data.tolist()})

    return ComplexJson(dims=complex_.dims, d=entries, weights=[weight.tolist() for weight in complex_.weights])


def _read_json(path: Path | str) -> Any:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as ex:
        raise ComplexError("invalid_complex", detail=f"could not read '{path}': {ex}") from ex


def load_complex(path: Path | str) -> CochainComplex:
    """Load complex from a JSON file."""

    return complex_from_json(_read_json(path))


def dump_complex(complex_: CochainComplex, path: Path | str) -> None:
    """Write complex to a JSON file."""

    Path(path).write_text(json.dumps(complex_to_json(complex_)), encoding="utf-8")


def load_cochain(path: Path | str) -> Cochain:
    """Load cochain from a JSON file."""

    data = _read_json(path)
    try:
        return Cochain(int(data["k"]), np.asarray(data["coeffs"], dtype=float))
    except (KeyError, TypeError, ValueError) as ex:
        raise ComplexError("invalid_complex", detail=f"malformed cochain JSON: {ex}") from ex


def dump_cochain(cochain: Cochain, path: Path | str) -> None:
    """Write cochain to a JSON file."""

    data = CochainJson(k=cochain.degree, coeffs=cochain.coeffs.tolist())
    Path(path).write_text(json.dumps(data), encoding="utf-8")

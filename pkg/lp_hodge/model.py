"""Warped-product models, form fields and the monotonicity quantities.

Form fields are given by Cartesian coefficients in normal coordinates around the
pole. On the hyperbolic model, tangential covectors are shortened by r/f(r), so a
k-form with radial part dr∧α and tangential part β has model norm
s^{2(k-1)}|α|² + s^{2k}|β|² with s = r/f(r).
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from itertools import pairwise
import logging
import math

import numpy as np

from .const import (
    BOCHNER_BASE_MESH,
    BOCHNER_SAMPLE_POINTS,
    CONVENTION_ANALYST,
    CONVENTION_POSITIVE,
    DEFAULT_SEED,
    RICHARDSON_BASE_RADIUS,
    VERDICT_NOT_APPLICABLE,
)
from .exceptions import FrameError, MonotonicitySignError, QuadratureError
from .exterior import FormVector, contract_matrix
from .pinching import PinchSpec, decay_rates
from .quadrature import QuadratureSpec, SphereAverage, radial_nodes, sphere_area, sphere_nodes, weighted_ratio
from .utils import check_exponent

_LOGGER = logging.getLogger(__name__)

WARP_FLAT = "flat"
WARP_HYPERBOLIC = "hyperbolic"

# Order below which a mesh sequence is treated as not converging
BOCHNER_MIN_ORDER = 1.9


@dataclass(frozen=True)
class WarpedModel:
    """Rotationally symmetric metric dr² + f(r)² g_{S^{n-1}}."""

    n: int
    warp: str = WARP_FLAT
    kappa: float = 1.0

    def __post_init__(self) -> None:
        """Validate model parameters."""

        if self.n < 2:
            raise QuadratureError("invalid_model", detail=f"dimension {self.n} < 2")
        if self.warp not in (WARP_FLAT, WARP_HYPERBOLIC):
            raise QuadratureError("invalid_model", detail=f"unknown warp '{self.warp}'")
        if self.kappa <= 0:
            raise QuadratureError("invalid_model", detail=f"curvature scale {self.kappa} must be positive")

    @classmethod
    def flat(cls, n: int) -> WarpedModel:
        """Return Euclidean space R^n."""

        return cls(n, WARP_FLAT)

    @classmethod
    def hyperbolic(cls, n: int, kappa: float = 1.0) -> WarpedModel:
        """Return hyperbolic space of curvature -κ²."""

        return cls(n, WARP_HYPERBOLIC, kappa)

    def f(self, r: float | np.ndarray) -> float | np.ndarray:
        """Return warping function, elementwise on arrays."""

        if self.warp == WARP_FLAT:
            return r
        return np.sinh(self.kappa * r) / self.kappa

    def df(self, r: float | np.ndarray) -> float | np.ndarray:
        """Return f'(r)."""

        if self.warp == WARP_FLAT:
            return 1.0
        return np.cosh(self.kappa * r)

    def hessian_eigenvalue(self, r: float) -> float:
        """Return λ(r) = f'/f, the tangential eigenvalue of Hess(r)."""

        return self.df(r) / self.f(r)

    def area(self, r: float) -> float:
        """Return area of the geodesic sphere of radius r."""

        return sphere_area(self.n) * self.f(r) ** (self.n - 1)

    def scale(self, r: float) -> float:
        """Return r/f(r), the tangential shrink factor of normal coordinates."""

        if self.warp == WARP_FLAT or r == 0:
            return 1.0
        return r / self.f(r)


class FormField(ABC):
    """k-form field on R^n given by Cartesian coefficients in normal coordinates."""

    n: int
    degree: int
    singular_at_pole: bool = False

    @abstractmethod
    def coefficients(self, points: np.ndarray) -> np.ndarray:
        """Return coefficients of shape (m, C(n, k)) at points of shape (m, n)."""

    def vanishes_at_pole(self) -> bool:
        """Return whether the field is zero at the origin."""

        if self.singular_at_pole:
            return False
        return not np.any(self.coefficients(np.zeros((1, self.n))))

    def __add__(self, other: FormField) -> SumFormField:
        """Return sum of two fields."""

        return SumFormField((self, other))


class ConstantFormField(FormField):
    """Form with constant Cartesian coefficients, p-harmonic on the flat model."""

    def __init__(self, form: FormVector) -> None:
        """Initialize field from a form at one point."""

        self.form = form
        self.n = form.frame.n
        self.degree = form.degree

    def coefficients(self, points: np.ndarray) -> np.ndarray:
        """Return the same coefficients at every point."""

        return np.broadcast_to(self.form.coeffs, (len(points), self.form.coeffs.size))


class LinearFormField(FormField):
    """Form whose coefficients are linear in x, vanishing at the pole."""

    def __init__(self, n: int, degree: int, matrix: np.ndarray) -> None:
        """Initialize field h(x) = matrix @ x."""

        matrix = np.asarray(matrix, dtype=float)
        if matrix.shape != (math.comb(n, degree), n):
            raise FrameError("invalid_frame", detail=f"matrix must have shape ({math.comb(n, degree)}, {n})")
        self.n = n
        self.degree = degree
        self.matrix = matrix

    def coefficients(self, points: np.ndarray) -> np.ndarray:
        """Return matrix @ x at every point."""

        return points @ self.matrix.T


class SumFormField(FormField):
    """Sum of form fields of equal dimension and degree."""

    def __init__(self, fields: tuple[FormField, ...]) -> None:
        """Initialize sum, flattening nested sums."""

        flat: list[FormField] = []
        for item in fields:
            flat.extend(item.fields if isinstance(item, SumFormField) else (item,))
        if len({(item.n, item.degree) for item in flat}) != 1:
            raise FrameError("frame_mismatch")
        self.fields = tuple(flat)
        self.n = flat[0].n
        self.degree = flat[0].degree
        self.singular_at_pole = any(item.singular_at_pole for item in flat)

    def coefficients(self, points: np.ndarray) -> np.ndarray:
        """Return sum of coefficients."""

        return sum(item.coefficients(points) for item in self.fields)


class RadialOracle(FormField):
    """Closed p-coclosed 1-form h = C·f(r)^{-(n-1)/(p-1)} dr, singular at the pole."""

    degree = 1
    singular_at_pole = True

    def __init__(self, model: WarpedModel, p: float, amplitude: float = 1.0) -> None:
        """Initialize oracle on a model for exponent p."""

        check_exponent(p)
        self.model = model
        self.n = model.n
        self.p = p
        self.amplitude = amplitude

    def magnitude(self, r: float | np.ndarray) -> float | np.ndarray:
        """Return |h| at radius r."""

        return self.amplitude * self.model.f(r) ** (-(self.n - 1) / (self.p - 1))

    def coefficients(self, points: np.ndarray) -> np.ndarray:
        """Return |h|(r)·x/r."""

        radii = np.linalg.norm(points, axis=1)
        return points * (self.magnitude(radii) / radii)[:, None]

    def flux(self, r: float) -> float:
        """Return closed form of ∫_{S_r}(1/p - μ)|h|^p dσ, with μ = 1."""

        exponent = -(self.n - 1) / (self.p - 1)
        return (1 / self.p - 1) * sphere_area(self.n) * self.amplitude**self.p * self.model.f(r) ** exponent

    def coclosed_residual(self, r: float) -> float:
        """Return d*(|h|^{p-2}h) = -g' - (n-1)(f'/f)g for g = C^{p-1}f^{-(n-1)}."""

        f, df = self.model.f(r), self.model.df(r)
        g = self.amplitude ** (self.p - 1) * f ** (-(self.n - 1))
        dg = -(self.n - 1) * self.amplitude ** (self.p - 1) * f ** (-self.n) * df

        return -dg - (self.n - 1) * (df / f) * g


@dataclass(frozen=True)
class SphereWeights:
    """Monotonicity weights and sphere integrals at one radius."""

    r: float
    mu: SphereAverage
    w: SphereAverage
    flux: float
    density: float
    mass: float


@dataclass(frozen=True)
class SmallRadiusLimits:
    """Extrapolated limits of μ and r·w at the pole."""

    mu_limit: float
    rw_limit: float
    expected_mu: float | None
    expected_rw: float | None
    relation: float
    relation_residual: float


@dataclass(frozen=True)
class IdentityCheck:
    """Both sides of the flux identity on a ball or annulus."""

    lhs: float
    rhs: float
    residual: float
    closed_form: float | None = None
    closed_form_residual: float | None = None


@dataclass(frozen=True)
class OdeFactorCheck:
    """Ratio Y(σ)/Y(τ) against the integrated exponential factor."""

    lhs_ratio: float
    exp_factor: float
    literal_factor: float
    residual: float


@dataclass(frozen=True)
class DecayCheck:
    """Exponential decay of the annulus-normalized weighted integral."""

    applicable: bool
    ratio: float | None = None
    bound: float | None = None
    rate: float | None = None
    closed_form_ratio: float | None = None
    annulus_residual: float | None = None
    ok: bool = True
    verdict: str | None = None


@dataclass(frozen=True)
class BochnerCheck:
    """Finite-difference residuals of the Bochner formula under mesh refinement."""

    meshes: tuple[float, ...]
    residuals: tuple[float, ...]
    orders: tuple[float, ...]
    convention: str
    flipped: bool = False

    @property
    def order(self) -> float:
        """Return the smallest observed convergence order."""

        return min(self.orders)

    @property
    def converged(self) -> bool:
        """Return whether every refinement step reached second order."""

        return self.order >= BOCHNER_MIN_ORDER


@dataclass
class _Profile:
    nodes: np.ndarray
    weights: np.ndarray
    samples: list[SphereWeights] = field(default_factory=list)


def _check_model(form: FormField, model: WarpedModel) -> None:
    if form.n != model.n:
        raise FrameError("frame_mismatch")
    if isinstance(form, RadialOracle) and form.model != model:
        raise FrameError("frame_mismatch")


def _contraction_norms(coeffs: np.ndarray, directions: np.ndarray, n: int, k: int) -> np.ndarray:
    """Return |i_θ h|² rowwise."""

    if k == 0:
        return np.zeros(len(coeffs))
    contracted = sum(directions[:, [c]] * (coeffs @ contract_matrix(n, k, c).T.toarray()) for c in range(n))

    return np.sum(contracted**2, axis=1)


def _sphere_terms(form: FormField, model: WarpedModel, r: float, quad: QuadratureSpec) -> tuple[np.ndarray, ...]:
    """Return model norms |h|², radial shares, node weights and the scheme on S_r."""

    n, k = model.n, form.degree
    directions, weights, scheme = sphere_nodes(n, quad)

    coeffs = np.asarray(form.coefficients(r * directions), dtype=float)
    radial = _contraction_norms(coeffs, directions, n, k)
    tangential = np.clip(np.sum(coeffs**2, axis=1) - radial, 0, None)

    s = model.scale(r)
    radial_part = s ** (2 * (k - 1)) * radial if k else radial
    norm2 = radial_part + s ** (2 * k) * tangential
    share = np.divide(radial_part, norm2, out=np.zeros_like(norm2), where=norm2 > 0)

    return norm2, share, weights, scheme


def sphere_weights(form: FormField, model: WarpedModel, r: float, p: float, quad: QuadratureSpec) -> SphereWeights:
    """Return μ_p, w_p and the flux integrands of a form on the sphere of radius r."""

    _check_model(form, model)
    check_exponent(p)
    n, k = model.n, form.degree
    norm2, share, weights, scheme = _sphere_terms(form, model, r, quad)
    hp = norm2 ** (p / 2)

    # Integrate over S_r
    lam = model.hessian_eigenvalue(r)
    area = model.area(r)
    w_integrand = hp * ((n - 1) / p - k + share)
    flux = area * float(weights @ (hp * (1 / p - share)))
    density = area * lam * float(weights @ w_integrand)
    mass = area * float(weights @ hp)

    if not np.any(hp > 0):
        nan = SphereAverage(math.nan, math.nan)
        return SphereWeights(r, nan, nan, flux, density, mass)

    mu = weighted_ratio(hp * share, hp, weights, scheme)
    w = weighted_ratio(w_integrand, hp, weights, scheme)

    return SphereWeights(r, mu, SphereAverage(lam * w.value, lam * w.stderr), flux, density, mass)


def _nonvanishing(sample: SphereWeights) -> SphereWeights:
    if math.isnan(sample.mu.value):
        raise QuadratureError("vanishing_form", r=sample.r)
    return sample


def mu_eval(form: FormField, model: WarpedModel, r: float, p: float, quad: QuadratureSpec) -> float:
    """Return μ_p(h, r)."""

    return _nonvanishing(sphere_weights(form, model, r, p, quad)).mu.value


def w_eval(form: FormField, model: WarpedModel, r: float, p: float, quad: QuadratureSpec) -> float:
    """Return w_p(h, r)."""

    return _nonvanishing(sphere_weights(form, model, r, p, quad)).w.value


def _richardson(values: list[float]) -> float:
    # Errors expand in even powers of the radius; halving steps
    first = [(4 * fine - coarse) / 3 for coarse, fine in pairwise(values)]
    return (16 * first[1] - first[0]) / 15


def small_r_limits(form: FormField, model: WarpedModel, p: float, quad: QuadratureSpec) -> SmallRadiusLimits:
    """Return Richardson-extrapolated limits of μ_p and r·w_p at the pole.

    For fields vanishing at the pole no value is claimed; the relation between the
    two limits is reported with the measured μ-limit.
    """

    if form.singular_at_pole:
        raise QuadratureError("singular_domain", detail="limits at the pole need a form smooth there")
    n, k = model.n, form.degree

    # Extrapolate from r, r/2 and r/4
    radii = [RICHARDSON_BASE_RADIUS / 2**step for step in range(3)]
    samples = [_nonvanishing(sphere_weights(form, model, r, p, quad)) for r in radii]
    mu_limit = _richardson([sample.mu.value for sample in samples])
    rw_limit = _richardson([sample.r * sample.w.value for sample in samples])

    # Expected values only for fields not vanishing at the pole
    relation = (n - 1 - p * k + p * mu_limit) / p
    vanishes = form.vanishes_at_pole()

    return SmallRadiusLimits(
        mu_limit=mu_limit,
        rw_limit=rw_limit,
        expected_mu=None if vanishes else k / n,
        expected_rw=None if vanishes else (n - 1) * (1 / p - k / n),
        relation=relation,
        relation_residual=abs(rw_limit - relation),
    )


def _check_interval(form: FormField, sigma: float, tau: float) -> None:
    if sigma < 0 or tau < sigma:
        raise QuadratureError("invalid_interval", sigma=sigma, tau=tau)
    if sigma == 0 and form.singular_at_pole:
        raise QuadratureError("singular_domain", detail="ball mode needs a form smooth at the pole")


def _profile(
    form: FormField, model: WarpedModel, p: float, start: float, stop: float, quad: QuadratureSpec
) -> _Profile:
    nodes, weights = radial_nodes(start, stop, quad)
    profile = _Profile(nodes, weights)
    profile.samples = [sphere_weights(form, model, float(r), p, quad) for r in nodes]

    return profile


def _integral(profile: _Profile, values: list[float]) -> float:
    return float(profile.weights @ np.asarray(values))


def monotonicity_identity_residual(
    form: FormField, model: WarpedModel, p: float, sigma: float, tau: float, quad: QuadratureSpec
) -> IdentityCheck:
    """Return relative residual of ∫_{∂}(1/p - μ)|h|^p dσ = ∫ w|h|^p dv.

    σ = 0 integrates over the ball B_τ; σ > 0 over the annulus, with the inner
    boundary flux subtracted from the left side.
    """

    _check_interval(form, sigma, tau)

    # Boundary side
    outer = sphere_weights(form, model, tau, p, quad)
    inner_flux = sphere_weights(form, model, sigma, p, quad).flux if sigma > 0 else 0.0

    lhs = outer.flux - inner_flux

    # Volume side
    profile = _profile(form, model, p, sigma, tau, quad)
    rhs = _integral(profile, [sample.density for sample in profile.samples])

    # Both sides vanish identically when p = n/k; scale by the boundary mass instead
    denominator = max(abs(rhs), outer.mass / p)
    residual = abs(lhs - rhs) / denominator if denominator > 0 else 0.0

    closed_form = closed_residual = None
    if isinstance(form, RadialOracle):
        closed_form = form.flux(tau) - form.flux(sigma)
        closed_residual = abs(rhs - closed_form) / denominator

    _LOGGER.debug("Flux identity on [%s, %s]: lhs '%s', rhs '%s'", sigma, tau, lhs, rhs)

    return IdentityCheck(lhs, rhs, residual, closed_form, closed_residual)


def _check_sign(values: list[float], sigma: float, tau: float) -> None:
    signs = {math.copysign(1.0, value) for value in values}
    if len(signs) > 1 or any(abs(value) < 1e-12 for value in values):
        raise MonotonicitySignError("sign_change", sigma=sigma, tau=tau)


def ode_factor_check(
    form: FormField, model: WarpedModel, p: float, sigma: float, tau: float, quad: QuadratureSpec
) -> OdeFactorCheck:
    """Compare Y(σ)/Y(τ) with exp(-∫_σ^τ p·w/(1 - pμ) ds).

    Y(t) is ∫_{B_t} w|h|^p dv for fields smooth at the pole and the flux through S_t
    for singular ones. The factor with an extra 1/s in the exponent is reported as
    literal_factor.
    """

    if sigma <= 0 or tau < sigma:
        raise QuadratureError("invalid_interval", sigma=sigma, tau=tau)
    if tau == sigma:
        return OdeFactorCheck(1.0, 1.0, 1.0, 0.0)

    # Validate sign of 1/p - μ, the ODE divides by it
    profile = _profile(form, model, p, sigma, tau, quad)
    endpoints = [sphere_weights(form, model, r, p, quad) for r in (sigma, tau)]
    samples = [_nonvanishing(sample) for sample in profile.samples + endpoints]
    _check_sign([1 / p - sample.mu.value for sample in samples], sigma, tau)

    # Y at both ends
    if form.singular_at_pole:
        y_sigma = endpoints[0].flux
    else:
        inner = _profile(form, model, p, 0.0, sigma, quad)
        y_sigma = _integral(inner, [sample.density for sample in inner.samples])
    y_tau = y_sigma + _integral(profile, [sample.density for sample in profile.samples])

    # Exponent of the ODE factor
    rates = [p * sample.w.value / (1 - p * sample.mu.value) for sample in profile.samples]
    exponent = _integral(profile, rates)
    literal = _integral(profile, [rate / float(r) for rate, r in zip(rates, profile.nodes, strict=True)])

    lhs_ratio = y_sigma / y_tau
    factor = math.exp(-exponent)

    return OdeFactorCheck(
        lhs_ratio=lhs_ratio,
        exp_factor=factor,
        literal_factor=math.exp(-literal),
        residual=abs(lhs_ratio - factor) / max(abs(factor), 1e-300),
    )


def ip_integral(
    form: FormField, model: WarpedModel, radius: float, p: float, quad: QuadratureSpec, inner: float = 0.0
) -> float:
    """Return I_p = ∫|h|^p dv over the ball B_radius about the pole, or an annulus."""

    _check_interval(form, inner, radius)
    profile = _profile(form, model, p, inner, radius, quad)

    return _integral(profile, [sample.mass for sample in profile.samples])


def decay_check(n: int, p: float, sigma: float, tau: float, quad: QuadratureSpec, amplitude: float = 1.0) -> DecayCheck:
    """Check |Y(τ)|/|Y(σ)| ≤ exp(-rate·(τ-σ)) for the radial 1-form oracle on H^n.

    Applies for k = 1, δ = 1 and p below the low threshold n - 1.
    """

    check_exponent(p)
    if not p < n - 1:
        return DecayCheck(applicable=False, verdict=VERDICT_NOT_APPLICABLE)

    model = WarpedModel.hyperbolic(n)
    oracle = RadialOracle(model, p, amplitude)
    rate, _ = decay_rates(PinchSpec(n=n, k=1, delta=1.0, p=p))

    y_sigma = sphere_weights(oracle, model, sigma, p, quad).flux

    # Y(τ) is the flux through S_τ, the annulus integral is only cross-checked
    y_tau = sphere_weights(oracle, model, tau, p, quad).flux
    profile = _profile(oracle, model, p, sigma, tau, quad)
    annulus = _integral(profile, [sample.density for sample in profile.samples])

    ratio = abs(y_tau) / abs(y_sigma)
    bound = math.exp(-rate * (tau - sigma))

    return DecayCheck(
        applicable=True,
        ratio=ratio,
        bound=bound,
        rate=rate,
        closed_form_ratio=abs(oracle.flux(tau)) / abs(oracle.flux(sigma)),
        annulus_residual=abs(y_sigma + annulus - y_tau) / abs(y_sigma),
        ok=ratio <= bound * (1 + 1e-9),
    )


def _values(form: FormField, points: np.ndarray) -> np.ndarray:
    return np.asarray(form.coefficients(points), dtype=float)


def _bochner_residual_at(form: FormField, p: float, points: np.ndarray, mesh: float, convention: str) -> float:
    """Return max |LHS - RHS| of the Bochner formula for a 1-form by central differences."""

    n = form.n
    shifts = mesh * np.eye(n)

    def rho(x: np.ndarray) -> np.ndarray:
        return np.linalg.norm(_values(form, x), axis=1)

    def rho_p(x: np.ndarray) -> np.ndarray:
        return rho(x) ** p

    def gradient(function, x: np.ndarray) -> np.ndarray:
        return np.stack([(function(x + shift) - function(x - shift)) / (2 * mesh) for shift in shifts], axis=1)

    def vector_field(x: np.ndarray) -> np.ndarray:
        # V_j = Σ_k (2ĥ_jĥ_k - δ_jk) ∂_k|h|^p
        values = _values(form, x)
        unit = values / np.linalg.norm(values, axis=1, keepdims=True)
        grad = gradient(rho_p, x)
        return 2 * unit * np.sum(unit * grad, axis=1, keepdims=True) - grad

    # Laplacian of |h|^p/2 in the chosen sign convention
    center = 0.5 * rho_p(points)
    second = sum(0.5 * rho_p(points + shift) - 2 * center + 0.5 * rho_p(points - shift) for shift in shifts)
    laplacian = -second / mesh**2 if convention == CONVENTION_POSITIVE else second / mesh**2

    # Right side
    grad_h = sum(
        np.sum(((_values(form, points + shift) - _values(form, points - shift)) / (2 * mesh)) ** 2, axis=1)
        for shift in shifts
    )
    grad_rho = np.sum(gradient(rho, points) ** 2, axis=1)
    divergence = sum(
        (vector_field(points + shift)[:, j] - vector_field(points - shift)[:, j]) / (2 * mesh)
        for j, shift in enumerate(shifts)
    )

    rhs = -rho(points) ** (p - 2) * (grad_h - (2 - p) * grad_rho) - (2 - p) / (2 * p) * divergence

    return float(np.max(np.abs(laplacian - rhs)))


def bochner_sample_points(n: int, seed: int = DEFAULT_SEED, count: int = BOCHNER_SAMPLE_POINTS) -> np.ndarray:
    """Return seeded points in the annulus 1 ≤ |x| ≤ 2."""

    rng = np.random.default_rng(seed)
    directions = rng.standard_normal((count, n))
    directions /= np.linalg.norm(directions, axis=1, keepdims=True)

    return directions * rng.uniform(1.0, 2.0, (count, 1))


def bochner_residual(
    form: FormField,
    p: float,
    convention: str = CONVENTION_POSITIVE,
    seed: int = DEFAULT_SEED,
    base_mesh: float = BOCHNER_BASE_MESH,
) -> BochnerCheck:
    """Return Bochner residuals of a flat 1-form field at meshes h, h/2, h/4."""

    check_exponent(p)
    if form.degree != 1:
        raise FrameError("identity_degree", expected=1, k=form.degree)
    if isinstance(form, RadialOracle) and form.model.warp != WARP_FLAT:
        raise QuadratureError("invalid_model", detail="Bochner check needs the flat model")

    points = bochner_sample_points(form.n, seed)
    if form.singular_at_pole and np.min(np.linalg.norm(points, axis=1)) <= 2 * base_mesh:
        raise QuadratureError("singular_domain", detail="stencil reaches the pole")

    meshes = tuple(base_mesh / 2**step for step in range(3))
    residuals = tuple(_bochner_residual_at(form, p, points, mesh, convention) for mesh in meshes)
    orders = tuple(math.inf if fine < 1e-13 else math.log2(coarse / fine) for coarse, fine in pairwise(residuals))

    return BochnerCheck(meshes, residuals, orders, convention)


def resolve_bochner_convention(convention: str, seed: int = DEFAULT_SEED) -> tuple[str, bool]:
    """Return Laplacian convention validated on the flat p = 2 oracle and whether it was flipped."""

    oracle = RadialOracle(WarpedModel.flat(3), 2.0)
    if bochner_residual(oracle, 2.0, convention, seed).converged:
        return convention, False

    flipped = CONVENTION_ANALYST if convention == CONVENTION_POSITIVE else CONVENTION_POSITIVE
    _LOGGER.warning("Bochner convention '%s' fails on the p=2 flat case, using '%s'!", convention, flipped)

    return flipped, True

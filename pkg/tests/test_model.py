"""Tests for warped models and the monotonicity quantities."""

from __future__ import annotations

import math

import numpy as np
import pytest

from lp_hodge.const import CONVENTION_ANALYST, CONVENTION_POSITIVE, VERDICT_NOT_APPLICABLE
from lp_hodge.exceptions import FrameError, MonotonicitySignError, QuadratureError
from lp_hodge.exterior import FormVector, Frame
from lp_hodge.model import (
    ConstantFormField,
    LinearFormField,
    RadialOracle,
    WarpedModel,
    bochner_residual,
    decay_check,
    ip_integral,
    monotonicity_identity_residual,
    mu_eval,
    ode_factor_check,
    resolve_bochner_convention,
    small_r_limits,
    sphere_weights,
    w_eval,
)
from lp_hodge.quadrature import QuadratureSpec


def constant(n: int, *indices: int) -> ConstantFormField:
    """Return constant monomial field."""

    return ConstantFormField(FormVector.monomial(Frame.standard(n), *indices))


def test_models() -> None:
    """Test warping functions and validation."""

    hyperbolic = WarpedModel.hyperbolic(3)
    assert hyperbolic.f(1.0) == pytest.approx(math.sinh(1.0))
    assert hyperbolic.hessian_eigenvalue(1.0) == pytest.approx(1 / math.tanh(1.0))
    assert WarpedModel.flat(3).area(2.0) == pytest.approx(16 * math.pi)
    assert WarpedModel.hyperbolic(3, kappa=2.0).f(1.0) == pytest.approx(math.sinh(2.0) / 2)

    with pytest.raises(QuadratureError):
        WarpedModel(1)
    with pytest.raises(QuadratureError):
        WarpedModel(3, "spherical")
    with pytest.raises(QuadratureError):
        WarpedModel.hyperbolic(3, kappa=0.0)


def test_constant_form_weights(quad: QuadratureSpec) -> None:
    """Test μ_p = k/n and w_p = ((n-1)/p - k + k/n)/r for a constant flat form."""

    form = constant(3, 0)
    model = WarpedModel.flat(3)
    assert mu_eval(form, model, 0.7, 2.0, quad) == pytest.approx(1 / 3, abs=1e-12)
    assert w_eval(form, model, 0.7, 2.0, quad) == pytest.approx((1 - 1 + 1 / 3) / 0.7, abs=1e-12)

    two_form = constant(4, 0, 1)
    assert mu_eval(two_form, WarpedModel.flat(4), 1.3, 3.0, quad) == pytest.approx(2 / 4, abs=1e-12)


def test_radial_oracle(quad: QuadratureSpec) -> None:
    """Test oracle is fully radial, coclosed and matches its closed-form flux."""

    model = WarpedModel.hyperbolic(4)
    oracle = RadialOracle(model, 2.5)
    sample = sphere_weights(oracle, model, 1.5, 2.5, quad)

    assert sample.mu.value == pytest.approx(1.0, abs=1e-12)
    assert sample.flux == pytest.approx(oracle.flux(1.5), rel=1e-12)
    assert oracle.coclosed_residual(1.5) == pytest.approx(0.0, abs=1e-12)
    assert not oracle.vanishes_at_pole()


def test_vanishing_form(quad: QuadratureSpec) -> None:
    """Test weights of the zero form are undefined."""

    form = ConstantFormField(FormVector.zero(Frame.standard(3), 1))
    sample = sphere_weights(form, WarpedModel.flat(3), 1.0, 2.0, quad)
    assert math.isnan(sample.mu.value)
    assert sample.flux == 0.0
    with pytest.raises(QuadratureError):
        mu_eval(form, WarpedModel.flat(3), 1.0, 2.0, quad)


@pytest.mark.parametrize("n", [3, 4, 5])
@pytest.mark.parametrize("p", [1.5, 2.0, 3.0])
@pytest.mark.parametrize("indices", [(0,), (0, 1)])
def test_identity_ball(n: int, p: float, indices: tuple[int, ...], quad: QuadratureSpec) -> None:
    """Test the flux identity on flat balls."""

    check = monotonicity_identity_residual(constant(n, *indices), WarpedModel.flat(n), p, 0.0, 1.0, quad)
    assert check.residual < 1e-6


@pytest.mark.parametrize("n", [3, 4, 5])
@pytest.mark.parametrize("p", [1.5, 2.0, 3.0])
def test_identity_annulus_oracle(n: int, p: float, quad: QuadratureSpec) -> None:
    """Test the flux identity and closed form for the hyperbolic oracle."""

    model = WarpedModel.hyperbolic(n)
    check = monotonicity_identity_residual(RadialOracle(model, p), model, p, 1.0, 2.0, quad)
    assert check.residual < 1e-6
    assert check.closed_form_residual < 1e-8


def test_identity_rejects_singular_ball(quad: QuadratureSpec) -> None:
    """Test ball mode needs a field smooth at the pole."""

    model = WarpedModel.flat(3)
    with pytest.raises(QuadratureError):
        monotonicity_identity_residual(RadialOracle(model, 2.0), model, 2.0, 0.0, 1.0, quad)
    with pytest.raises(QuadratureError):
        monotonicity_identity_residual(constant(3, 0), model, 2.0, 2.0, 1.0, quad)
    with pytest.raises(FrameError):
        monotonicity_identity_residual(constant(4, 0), model, 2.0, 0.0, 1.0, quad)


def test_ode_factor_constant(quad: QuadratureSpec) -> None:
    """Test Y(σ)/Y(τ) = (σ/τ)^{n-1} for a constant flat form."""

    check = ode_factor_check(constant(3, 0), WarpedModel.flat(3), 2.0, 0.5, 1.0, quad)
    assert check.lhs_ratio == pytest.approx(0.25, rel=1e-8)
    assert check.residual < 1e-6


def test_ode_factor_oracle(quad: QuadratureSpec) -> None:
    """Test the ODE factor on the hyperbolic oracle annulus."""

    model = WarpedModel.hyperbolic(4)
    check = ode_factor_check(RadialOracle(model, 2.0), model, 2.0, 1.0, 2.0, quad)
    assert check.residual < 1e-6


def test_ode_sign_crossing(quad: QuadratureSpec) -> None:
    """Test a harmonic sum whose radial share crosses 1/p is rejected."""

    model = WarpedModel.flat(3)
    crossing = constant(3, 0) + RadialOracle(model, 2.0)
    with pytest.raises(MonotonicitySignError):
        ode_factor_check(crossing, model, 2.0, 0.5, 3.0, quad)


def test_ip_integral(quad: QuadratureSpec) -> None:
    """Test I_p of a unit constant form is the ball volume."""

    assert ip_integral(constant(3, 0), WarpedModel.flat(3), 1.0, 2.5, quad) == pytest.approx(4 * math.pi / 3)


@pytest.mark.parametrize("model", [WarpedModel.flat(4), WarpedModel.hyperbolic(4)])
@pytest.mark.parametrize("indices", [(0,), (1, 2)])
def test_small_radius_limits(model: WarpedModel, indices: tuple[int, ...], quad: QuadratureSpec) -> None:
    """Test extrapolated limits μ_p → k/n and r·w_p → (n-1)(1/p - k/n)."""

    limits = small_r_limits(constant(4, *indices), model, 3.0, quad)
    assert limits.mu_limit == pytest.approx(limits.expected_mu, abs=1e-4)
    assert limits.rw_limit == pytest.approx(limits.expected_rw, abs=1e-4)


def test_small_radius_vanishing_field(quad: QuadratureSpec, rng: np.random.Generator) -> None:
    """Test only the relation is claimed for fields vanishing at the pole."""

    field = LinearFormField(3, 1, rng.standard_normal((3, 3)))
    limits = small_r_limits(field, WarpedModel.flat(3), 2.0, quad)
    assert limits.expected_mu is None
    assert limits.relation_residual < 1e-4

    with pytest.raises(QuadratureError):
        small_r_limits(RadialOracle(WarpedModel.flat(3), 2.0), WarpedModel.flat(3), 2.0, quad)


@pytest.mark.parametrize(("n", "p"), [(3, 1.5), (4, 1.5), (5, 1.5), (4, 2.5), (5, 3.5)])
@pytest.mark.parametrize("tau", [2.0, 3.0, 5.0])
def test_decay(n: int, p: float, tau: float, quad: QuadratureSpec) -> None:
    """Test the oracle decays at least at the low-range rate."""

    check = decay_check(n, p, 1.0, tau, quad)
    assert check.applicable
    assert check.ok
    assert check.ratio == pytest.approx(check.closed_form_ratio, rel=1e-6)
    assert check.annulus_residual < 1e-8


def test_decay_outside_range(quad: QuadratureSpec) -> None:
    """Test decay is not applicable for p ≥ n - 1."""

    check = decay_check(3, 2.5, 1.0, 2.0, quad)
    assert not check.applicable
    assert check.verdict == VERDICT_NOT_APPLICABLE


@pytest.mark.parametrize("p", [2.0, 3.0])
def test_bochner_oracle(p: float) -> None:
    """Test second order convergence of the Bochner residual."""

    check = bochner_residual(RadialOracle(WarpedModel.flat(3), p), p)
    assert check.converged
    assert check.residuals[-1] < check.residuals[0]


def test_bochner_convention() -> None:
    """Test the analyst convention is flipped on the p = 2 ground truth."""

    assert resolve_bochner_convention(CONVENTION_POSITIVE) == (CONVENTION_POSITIVE, False)
    assert resolve_bochner_convention(CONVENTION_ANALYST) == (CONVENTION_POSITIVE, True)
    with pytest.raises(FrameError):
        bochner_residual(constant(3, 0, 1), 2.0)

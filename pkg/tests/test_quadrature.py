"""Tests for sphere and radial quadrature."""

from __future__ import annotations

import math

import numpy as np
import pytest

from lp_hodge.const import SCHEME_MONTE_CARLO, SCHEME_PRODUCT_GAUSS
from lp_hodge.quadrature import QuadratureSpec, radial_integral, sphere_area, sphere_average, sphere_nodes


def test_sphere_area() -> None:
    """Test ω_1 = 2π, ω_2 = 4π, ω_3 = 2π²."""

    assert sphere_area(2) == pytest.approx(2 * math.pi)
    assert sphere_area(3) == pytest.approx(4 * math.pi)
    assert sphere_area(4) == pytest.approx(2 * math.pi**2)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_product_gauss_moments(n: int, quad: QuadratureSpec) -> None:
    """Test second and fourth moments of a coordinate on S^{n-1}."""

    directions, weights, scheme = sphere_nodes(n, quad)
    assert scheme == SCHEME_PRODUCT_GAUSS
    assert weights.sum() == pytest.approx(1.0)
    np.testing.assert_allclose(np.linalg.norm(directions, axis=1), 1.0, atol=1e-12)

    for index in range(n):
        assert sphere_average(lambda x, i=index: x[:, i] ** 2, n, quad).value == pytest.approx(1 / n, abs=1e-12)
    assert sphere_average(lambda x: x[:, 0] ** 4, n, quad).value == pytest.approx(3 / (n * (n + 2)), abs=1e-12)
    assert sphere_average(lambda x: x[:, 0] * x[:, -1], n, quad).value == pytest.approx(0.0, abs=1e-12)


def test_monte_carlo_above_product_dimension(quad: QuadratureSpec) -> None:
    """Test auto scheme switches to Monte Carlo with a standard error."""

    average = sphere_average(lambda x: x[:, 0] ** 2, 6, quad)
    assert average.value == pytest.approx(1 / 6, abs=5 * average.stderr + 1e-12)
    assert average.stderr > 0


def test_forced_scheme() -> None:
    """Test an explicit scheme is honoured in any dimension."""

    quad = QuadratureSpec(scheme=SCHEME_MONTE_CARLO, n_mc=2000, seed=7)
    _, weights, scheme = sphere_nodes(3, quad)
    assert scheme == SCHEME_MONTE_CARLO
    assert weights.size == 2000


def test_radial_integral(quad: QuadratureSpec) -> None:
    """Test Gauss-Legendre integration of sinh on [0, 2]."""

    assert radial_integral(math.sinh, 0.0, 2.0, quad) == pytest.approx(math.cosh(2.0) - 1, rel=1e-13)
    assert radial_integral(math.sinh, 2.0, 1.0, quad) == 0.0

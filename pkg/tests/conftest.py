"""Fixtures for lp-hodge tests."""

from __future__ import annotations

import numpy as np
import pytest

from lp_hodge.config import validate_config
from lp_hodge.discrete import CochainComplex, cycle_complex, path_complex
from lp_hodge.quadrature import QuadratureSpec


@pytest.fixture
def config() -> dict:
    """Return validated default configuration."""

    return validate_config()


@pytest.fixture
def quad(config: dict) -> QuadratureSpec:
    """Return default quadrature settings."""

    return QuadratureSpec.from_config(config)


@pytest.fixture
def rng() -> np.random.Generator:
    """Return seeded random generator."""

    return np.random.default_rng(20240611)


@pytest.fixture
def cycle4() -> CochainComplex:
    """Return complex of the oriented 4-cycle."""

    return cycle_complex(4)


@pytest.fixture
def path3() -> CochainComplex:
    """Return complex of the oriented path with 3 vertices."""

    return path_complex(3)

"""L_p-cohomology of negatively curved manifolds and symmetric spaces."""

from __future__ import annotations

from .config import load_config, validate_config
from .discrete import (
    Cochain,
    CochainComplex,
    HodgeResult,
    SolverConfig,
    graph_complex,
    pcoclosed_primitive,
    pharmonic_representative,
)
from .exceptions import LpHodgeError
from .exterior import FormVector, Frame, hodge_star, nonlinear_star
from .pinching import PinchSpec, reduced_thresholds
from .roots import build_root_system, gromov_verdict, weight_profile

__all__ = [
    "Cochain",
    "CochainComplex",
    "FormVector",
    "Frame",
    "HodgeResult",
    "LpHodgeError",
    "PinchSpec",
    "SolverConfig",
    "build_root_system",
    "graph_complex",
    "gromov_verdict",
    "hodge_star",
    "load_config",
    "nonlinear_star",
    "pcoclosed_primitive",
    "pharmonic_representative",
    "reduced_thresholds",
    "validate_config",
    "weight_profile",
]

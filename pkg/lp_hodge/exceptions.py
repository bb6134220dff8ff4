"""Exceptions for the lp-hodge package."""

from __future__ import annotations

from functools import cache
import json
from pathlib import Path
from typing import Any

_STRINGS = Path(__file__).with_name("strings.json")


@cache
def _exception_messages() -> dict[str, str]:
    """Return exception message templates keyed by translation key."""

    strings = json.loads(_STRINGS.read_text(encoding="utf-8"))
    return {key: value["message"] for key, value in strings["exceptions"].items()}


class LpHodgeError(ValueError):
    """Base error carrying a translation key and its placeholders."""

    def __init__(self, translation_key: str, **translation_placeholders: Any) -> None:
        """Initialize error and render its message from strings.json."""

        self.translation_key = translation_key
        self.translation_placeholders = translation_placeholders
        template = _exception_messages().get(translation_key, translation_key)
        super().__init__(template.format(**translation_placeholders))


class FrameError(LpHodgeError):
    """Frame mismatch, degree overflow or bad covector index."""


class ExponentError(LpHodgeError):
    """Exponent or pinching parameter outside its admissible range."""


class RootSystemError(LpHodgeError):
    """Invalid root system request."""


class QuadratureError(LpHodgeError):
    """Quadrature cannot be evaluated on the requested domain."""


class MonotonicitySignError(LpHodgeError):
    """1/p - mu changes sign on the integration interval."""


class ComplexError(LpHodgeError):
    """Malformed cochain complex or cochain."""


class NotExactError(LpHodgeError):
    """Cochain is not in the image of d."""


class NotClosedError(LpHodgeError):
    """Cochain is not in the kernel of d."""


class SolverError(LpHodgeError):
    """Convex solver did not converge."""

    def __init__(self, translation_key: str, **translation_placeholders: Any) -> None:
        """Initialize error and keep the last residual."""

        self.last_residual = translation_placeholders.get("residual")
        super().__init__(translation_key, **translation_placeholders)


class ConfigError(LpHodgeError):
    """Configuration failed schema or cross-field validation."""

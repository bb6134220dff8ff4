"""Utils for the lp-hodge package."""

from __future__ import annotations

from fractions import Fraction
import math
from typing import Any

import numpy as np

from .const import INFINITY
from .exceptions import ExponentError
from .types import SerializedRational


def rational_to_json(value: Fraction | float | None) -> SerializedRational | str | float | None:
    """Serialize exact threshold as {num, den, float}, infinity as 'inf'."""

    if value is None:
        return None
    if isinstance(value, float) and math.isinf(value):
        return INFINITY
    if isinstance(value, Fraction):
        return SerializedRational(num=value.numerator, den=value.denominator, float=float(value))

    return float(value)


def to_jsonable(value: Any) -> Any:
    """Convert nested report values to JSON serializable values."""

    if isinstance(value, dict):
        return {str(key): to_jsonable(item) for key, item in value.items()}
    if isinstance(value, list | tuple):
        return [to_jsonable(item) for item in value]
    if isinstance(value, Fraction):
        return rational_to_json(value)
    if isinstance(value, np.ndarray):
        return to_jsonable(value.tolist())
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, float | np.floating):
        if math.isinf(value):
            return INFINITY if value > 0 else f"-{INFINITY}"
        if math.isnan(value):
            return None
        return float(value)

    return value


def parse_exponent(value: str) -> Fraction:
    """Parse exponent given as decimal or ratio string into exact rational."""

    try:
        return Fraction(value)
    except (ValueError, ZeroDivisionError) as ex:
        raise ExponentError("exponent_range", p=value) from ex


def check_exponent(p: float | Fraction) -> None:
    """Raise when exponent is not greater than 1."""

    if not p > 1:
        raise ExponentError("exponent_range", p=p)

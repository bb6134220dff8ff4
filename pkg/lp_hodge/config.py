"""Configuration handling for the lp-hodge package."""

from __future__ import annotations

from copy import deepcopy
import hashlib
import json
import logging
from pathlib import Path
import tomllib
from typing import Any

import voluptuous as vol

from .const import (
    CONVENTION_ANALYST,
    CONVENTION_POSITIVE,
    DEFAULT_BOCHNER_CONVENTION,
    DEFAULT_EPS_FACTOR,
    DEFAULT_EPS_START,
    DEFAULT_EPS_STOP,
    DEFAULT_GAUSS_NODES,
    DEFAULT_GRID_DELTA_VALUES,
    DEFAULT_GRID_N_MAX,
    DEFAULT_GRID_P_VALUES,
    DEFAULT_GRID_R_VALUES,
    DEFAULT_MAX_ITER,
    DEFAULT_N_MC,
    DEFAULT_RADIAL_NODES_PER_UNIT,
    DEFAULT_SCHEME,
    DEFAULT_SEED,
    DEFAULT_TOL_GRAD,
    DEFAULT_TOL_UNIQ,
    DEFAULT_WORKERS,
    SCHEME_AUTO,
    SCHEME_MONTE_CARLO,
    SCHEME_PRODUCT_GAUSS,
)
from .exceptions import ConfigError

_LOGGER = logging.getLogger(__name__)

_STRINGS = Path(__file__).with_name("strings.json")

POSITIVE_FLOAT = vol.All(vol.Coerce(float), vol.Range(min=0, min_included=False))


def get_schema(config: dict) -> vol.Schema:
    """Return configuration schema with defaults taken from the given config."""

    quadrature = config.get("quadrature", {})
    bochner = config.get("bochner", {})
    solver = config.get("solver", {})
    grid = config.get("grid", {})
    verify = config.get("verify", {})

    return vol.Schema(
        {
            vol.Optional("quadrature", default={}): vol.Schema(
                {
                    vol.Optional("gauss_nodes", default=quadrature.get("gauss_nodes", DEFAULT_GAUSS_NODES)): vol.All(
                        int, vol.Range(min=4)
                    ),
                    vol.Optional(
                        "radial_nodes_per_unit",
                        default=quadrature.get("radial_nodes_per_unit", DEFAULT_RADIAL_NODES_PER_UNIT),
                    ): vol.All(int, vol.Range(min=8)),
                    vol.Optional("n_mc", default=quadrature.get("n_mc", DEFAULT_N_MC)): vol.All(
                        int, vol.Range(min=1000)
                    ),
                    vol.Optional("seed", default=quadrature.get("seed", DEFAULT_SEED)): int,
                    vol.Optional("scheme", default=quadrature.get("scheme", DEFAULT_SCHEME)): vol.In(
                        [SCHEME_AUTO, SCHEME_PRODUCT_GAUSS, SCHEME_MONTE_CARLO]
                    ),
                }
            ),
            vol.Optional("bochner", default={}): vol.Schema(
                {
                    vol.Optional(
                        "convention", default=bochner.get("convention", DEFAULT_BOCHNER_CONVENTION)
                    ): vol.In([CONVENTION_POSITIVE, CONVENTION_ANALYST]),
                }
            ),
            vol.Optional("solver", default={}): vol.Schema(
                {
                    vol.Optional("tol_grad", default=solver.get("tol_grad", DEFAULT_TOL_GRAD)): POSITIVE_FLOAT,
                    vol.Optional("tol_uniq", default=solver.get("tol_uniq", DEFAULT_TOL_UNIQ)): POSITIVE_FLOAT,
                    vol.Optional("max_iter", default=solver.get("max_iter", DEFAULT_MAX_ITER)): vol.All(
                        int, vol.Range(min=1)
                    ),
                    vol.Optional("eps_start", default=solver.get("eps_start", DEFAULT_EPS_START)): POSITIVE_FLOAT,
                    vol.Optional("eps_stop", default=solver.get("eps_stop", DEFAULT_EPS_STOP)): POSITIVE_FLOAT,
                    vol.Optional("eps_factor", default=solver.get("eps_factor", DEFAULT_EPS_FACTOR)): POSITIVE_FLOAT,
                }
            ),
            vol.Optional("grid", default={}): vol.Schema(
                {
                    vol.Optional("n_max", default=grid.get("n_max", DEFAULT_GRID_N_MAX)): vol.All(
                        int, vol.Range(min=2, max=12)
                    ),
                    vol.Optional("p_values", default=grid.get("p_values", DEFAULT_GRID_P_VALUES)): [
                        vol.Coerce(float)
                    ],
                    vol.Optional("delta_values", default=grid.get("delta_values", DEFAULT_GRID_DELTA_VALUES)): [
                        vol.Coerce(float)
                    ],
                    vol.Optional("r_values", default=grid.get("r_values", DEFAULT_GRID_R_VALUES)): [POSITIVE_FLOAT],
                }
            ),
            vol.Optional("verify", default={}): vol.Schema(
                {
                    vol.Optional("workers", default=verify.get("workers", DEFAULT_WORKERS)): vol.All(
                        int, vol.Range(min=1)
                    ),
                }
            ),
        }
    )


def config_error_message(key: str, **placeholders: Any) -> str:
    """Return human readable message for a configuration error key."""

    errors = json.loads(_STRINGS.read_text(encoding="utf-8"))["config"]["error"]
    return errors.get(key, key).format(**placeholders)


def check_config(config: dict) -> dict[str, str]:
    """Return cross-field validation errors of a schema-validated config."""

    errors: dict[str, str] = {}
    solver = config["solver"]
    grid = config["grid"]

    # Validate smoothing schedule
    if solver["eps_stop"] >= solver["eps_start"]:
        errors["base"] = "eps_order"
    elif solver["eps_factor"] >= 1:
        errors["base"] = "eps_factor_range"

    # Validate sweep grid
    elif any(p <= 1 for p in grid["p_values"]):
        errors["base"] = "grid_p_range"
    elif any(not 0 < delta <= 1 for delta in grid["delta_values"]):
        errors["base"] = "grid_delta_range"

    return errors


def merge(base: dict, override: dict) -> dict:
    """Return nested merge of two config dicts, values of override winning."""

    merged = deepcopy(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = merge(merged[key], value)
        else:
            merged[key] = value

    return merged


def validate_config(user_input: dict | None = None) -> dict:
    """Validate user configuration and fill in defaults."""

    user_input = user_input or {}
    try:
        config = get_schema(user_input)(user_input)
    except vol.Invalid as ex:
        raise ConfigError("invalid_config", detail=config_error_message("invalid_schema", detail=ex)) from ex

    # Validate relations between keys
    errors = check_config(config)
    if errors:
        raise ConfigError("invalid_config", detail=config_error_message(errors["base"]))

    return config


def load_config(path: Path | str | None = None, overrides: dict | None = None) -> dict:
    """Load configuration from TOML file, apply overrides and validate it."""

    user_input: dict = {}
    if path is not None:
        _LOGGER.debug("Reading configuration file '%s'", path)
        try:
            with Path(path).open("rb") as file:
                user_input = tomllib.load(file)
        except (OSError, tomllib.TOMLDecodeError) as ex:
            raise ConfigError(
                "invalid_config", detail=config_error_message("unreadable_file", path=path, detail=ex)
            ) from ex

    config = validate_config(merge(user_input, overrides or {}))
    _LOGGER.debug("Configuration validated with hash '%s'", config_hash(config))

    return config


def config_hash(config: dict) -> str:
    """Return SHA-256 hash of the canonical JSON form of a config."""

    canonical = json.dumps(config, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()

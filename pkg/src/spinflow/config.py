"""Run-configuration schema and validation.

Configs are single JSON files validated against a published JSON Schema
(draft 2020-12) before any computation; unknown keys are rejected
everywhere.  Random presets must carry a seed -- runs are reproducible by
contract.
"""

import json

import jsonschema

from spinflow.errors import ConfigInvalid

FLOWS = ("hf", "mi", "ishimori", "mcf-graph", "mcf-parametric",
         "rf-plain", "rf-normalized",
         "rf-coupled-73", "rf-coupled-74", "rf-coupled-75", "rf-coupled-76",
         "burgers")

CHECKS = ("identity-2d", "egregium", "gauge", "lax", "frame-decomp",
          "metric-evolution", "dissipation", "metric3", "volume")

PRESETS = ("constant", "magnon", "sphere-cap", "random-smooth",
           "fourier-mode", "torus", "linear", "sine")

_NUM = {"type": "number"}
_VEC3 = {"type": "array", "items": _NUM, "minItems": 3, "maxItems": 3}

CONFIG_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "additionalProperties": False,
    "required": ["name", "flow", "grid", "params", "initial"],
    "properties": {
        "name": {"type": "string", "minLength": 1},
        "flow": {"enum": list(FLOWS)},
        "grid": {
            "type": "object",
            "additionalProperties": False,
            "required": ["nx", "ny", "Lx", "Ly"],
            "properties": {
                "nx": {"type": "integer", "minimum": 8},
                "ny": {"type": "integer", "minimum": 8},
                "Lx": {"type": "number", "exclusiveMinimum": 0},
                "Ly": {"type": "number", "exclusiveMinimum": 0},
                "x0": _NUM,
                "y0": _NUM,
            },
        },
        "params": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "dt": {"type": "number", "exclusiveMinimum": 0},
                "steps": {"type": "integer", "minimum": 1},
                "stride": {"type": "integer", "minimum": 1},
                "order": {"enum": [2, 4, "spectral"]},
                "integrator": {"enum": ["rk4", "heun"]},
                "project": {"type": "boolean"},
                "xi": _VEC3,
                "eta": _VEC3,
                "J": _VEC3,
                "alpha2": _NUM,
                "alpha": _NUM,
                "beta": _NUM,
                "k": _NUM,
                "lambdas": {"type": "array", "items": _NUM, "minItems": 1},
                "convention": {"enum": ["lambda_over_2i", "i_lambda_over_2", "both"]},
                "sign": {"enum": [1.0, -1.0, 1, -1]},
                "metric_laplacian": {"type": "boolean"},
                "freeze_metric": {"type": "boolean"},
                "t_end": {"type": "number", "exclusiveMinimum": 0},
                "ceiling_rhs": _NUM,
                "ceiling_u": _NUM,
                "grad_ceiling": _NUM,
            },
        },
        "initial": {
            "type": "object",
            "additionalProperties": False,
            "required": ["preset"],
            "properties": {
                "preset": {"enum": list(PRESETS)},
                "direction": _VEC3,
                "theta": _NUM,
                "k_mode": {"type": "integer"},
                "seed": {"type": "integer"},
                "bandwidth": {"type": "integer", "minimum": 1},
                "amplitude": {"type": "number", "exclusiveMinimum": 0},
                "m_twist": {"type": "integer"},
                "rho0": {"type": "number", "exclusiveMinimum": 0},
                "s_blend": _NUM,
                "s_flat": _NUM,
                "kx": {"type": "integer"},
                "ky": {"type": "integer"},
                "phase": _NUM,
                "a": _NUM,
                "t0": _NUM,
                "R_major": _NUM,
                "rho_minor": _NUM,
            },
        },
        "checks": {"type": "array", "items": {"enum": list(CHECKS)},
                   "uniqueItems": True},
        "expect_blowup": {"type": "boolean"},
    },
}

#: checks that make sense per flow
CHECKS_FOR_FLOW = {
    "hf": {"gauge", "lax", "egregium", "identity-2d", "frame-decomp"},
    "mi": {"gauge", "lax", "egregium", "identity-2d", "frame-decomp",
           "metric-evolution", "metric3"},
    "ishimori": {"gauge"},
    "mcf-graph": {"identity-2d"},
    "mcf-parametric": {"dissipation", "egregium", "identity-2d"},
    "rf-plain": {"volume", "identity-2d"},
    "rf-normalized": {"volume", "identity-2d"},
    "rf-coupled-73": {"volume"},
    "rf-coupled-74": {"volume"},
    "rf-coupled-75": {"volume"},
    "rf-coupled-76": {"volume"},
    "burgers": set(),
}


def validate_config(cfg):
    """Schema-validate a config dict; returns it unchanged on success."""
    try:
        jsonschema.validate(cfg, CONFIG_SCHEMA)
    except jsonschema.ValidationError as e:
        raise ConfigInvalid(f"config rejected: {e.message} "
                            f"(at {'/'.join(str(p) for p in e.absolute_path)})")
    init = cfg["initial"]
    if init["preset"] == "random-smooth" and "seed" not in init:
        raise ConfigInvalid("random-smooth preset requires an explicit seed")
    grid = cfg["grid"]
    if grid["nx"] % 2 or grid["ny"] % 2:
        raise ConfigInvalid("grid nx, ny must be even")
    for chk in cfg.get("checks", ()):
        allowed = CHECKS_FOR_FLOW[cfg["flow"]]
        if chk not in allowed:
            raise ConfigInvalid(
                f"check {chk!r} does not apply to flow {cfg['flow']!r} "
                f"(allowed: {sorted(allowed)})"
            )
    return cfg


def load_config(path):
    try:
        with open(path) as fh:
            cfg = json.load(fh)
    except json.JSONDecodeError as e:
        raise ConfigInvalid(f"config is not valid JSON: {e}")
    except OSError as e:
        raise ConfigInvalid(f"cannot read config: {e}")
    return validate_config(cfg)

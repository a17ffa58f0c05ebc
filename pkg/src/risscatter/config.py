"""Scenario configuration files: JSON schema and validated loading."""

from __future__ import annotations

import json
from pathlib import Path

import jsonschema

WORKFLOWS = ("coupling", "scatter", "bandwidth", "overhead", "routing", "estimate")


class ConfigError(Exception):
    """Invalid or unreadable scenario configuration."""


_num = {"type": "number"}
_pos = {"type": "number", "exclusiveMinimum": 0}
_posint = {"type": "integer", "minimum": 1}


def _list(item, min_items=1):
    return {"type": "array", "items": item, "minItems": min_items}


_LOAD = {
    "type": "object",
    "oneOf": [
        {"properties": {"kind": {"const": "zero"}}, "required": ["kind"], "additionalProperties": False},
        {"properties": {"kind": {"const": "phased"}, "phases": _list(_num)},
         "required": ["kind", "phases"], "additionalProperties": False},
        {"properties": {"kind": {"const": "switched"},
                        "pairs": _list(_list({"type": "integer", "minimum": 0}, 2), 0),
                        "n_side": _posint},
         "required": ["kind", "pairs"], "additionalProperties": False},
        {"properties": {"kind": {"const": "active"}, "gain": _pos, "inner": {"$ref": "#/$defs/load"}},
         "required": ["kind", "gain", "inner"], "additionalProperties": False},
    ],
}

_OUTPUT = {
    "type": "object",
    "properties": {"dir": {"type": "string"}, "format": {"enum": ["csv", "json"]},
                   "prefix": {"type": "string"}},
    "additionalProperties": False,
}

_COMMON = {"workflow": {"enum": list(WORKFLOWS)}, "seed": {"type": "integer", "minimum": 0},
           "output": _OUTPUT, "description": {"type": "string"}}

_PARAMS = {
    "coupling": ({"n_side": _list(_posint), "spacing": _list(_pos)}, ["n_side"]),
    "scatter": ({
        "n_side": _posint, "spacing": _pos, "trials": _posint, "max_waves": _posint,
        "grid": {"type": "object", "properties": {"n_theta": _posint, "n_phi": _posint},
                 "additionalProperties": False},
        "active_gains": _list(_pos, 0),
        "N0": _pos, "NF_inf": {"type": "number", "minimum": 1}, "N_I": _pos,
        "loads": _list({"$ref": "#/$defs/load"}, 0),
        "waves": _list({"type": "object",
                        "properties": {"theta_deg": {"type": "number", "minimum": 0, "maximum": 90},
                                       "phi_deg": _num, "amp_re": _num, "amp_im": _num},
                        "required": ["theta_deg", "phi_deg", "amp_re"],
                        "additionalProperties": False}, 0),
    }, ["n_side"]),
    "bandwidth": ({
        "d_tx": _list(_pos), "d_rx": _list(_pos),
        "theta_i_deg": _list({"type": "number", "minimum": -90, "maximum": 90}),
        "theta_r_deg": _list({"type": "number", "minimum": -90, "maximum": 90}),
        "size": _list(_pos),
    }, ["d_tx", "d_rx", "theta_i_deg", "theta_r_deg"]),
    "overhead": ({
        "K": _posint, "snr": _pos, "M_B": _pos, "b_A": {"type": "number", "minimum": 0},
        "eta_B": _pos, "N_s": _pos, "M_A": _list({"type": "number", "minimum": 1}),
        "grid_points": _posint,
    }, ["K", "snr", "M_B", "b_A", "eta_B", "N_s", "M_A"]),
    "routing": ({
        "n_side": _posint, "spacing": _pos, "K": _list(_posint), "draws": _posint,
        "model": {"enum": ["exact", "naive"]},
    }, ["n_side", "K"]),
    "estimate": ({
        "M": _list(_posint), "sparsity": _posint, "noise_sd": _list({"type": "number", "minimum": 0}),
        "trials": _posint,
    }, ["M", "noise_sd"]),
}


def schema_for(workflow: str) -> dict:
    props, required = _PARAMS[workflow]
    return {
        "$schema": "https://json-schema.org/draft/2020-12/schema",
        "type": "object",
        "properties": {**_COMMON, **props},
        "required": ["workflow", *required],
        "additionalProperties": False,
        "$defs": {"load": _LOAD},
    }


def validate(config, workflow: str | None = None) -> dict:
    """Validate a parsed configuration, raising :class:`ConfigError` with key paths."""
    if not isinstance(config, dict):
        raise ConfigError("configuration must be a JSON object")
    wf = config.get("workflow")
    if wf not in WORKFLOWS:
        raise ConfigError(f"$.workflow: expected one of {list(WORKFLOWS)}, got {wf!r}")
    if workflow is not None and wf != workflow:
        raise ConfigError(f"$.workflow: config is for {wf!r} but subcommand is {workflow!r}")
    validator = jsonschema.Draft202012Validator(schema_for(wf))
    errors = sorted(validator.iter_errors(config), key=lambda e: [str(p) for p in e.absolute_path])
    if errors:
        lines = []
        for e in errors:
            path = "$" + "".join(f"[{p}]" if isinstance(p, int) else f".{p}" for p in e.absolute_path)
            lines.append(f"{path}: {e.message}")
        raise ConfigError("\n".join(lines))
    return config


def load_config(path, workflow: str | None = None) -> dict:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        config = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    return validate(config, workflow)

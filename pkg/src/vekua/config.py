"""Run configuration: strict JSON schema, tolerances and object builders."""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import jsonschema
import numpy as np

from .errors import ConfigError, VekuaError
from .fields import ScalarField
from .pseudoanalytic import ConditionSData
from .solver import Domain
from .transforms import EllipticCoefficients

SCHEMA_VERSION = 1

_EXPR = {"type": "string", "minLength": 1}
_NUMBER = {"type": "number"}
_COMPLEX = {"oneOf": [_NUMBER, {"type": "array", "items": _NUMBER, "minItems": 2, "maxItems": 2}]}
_PARAMS = {"type": "object", "additionalProperties": _COMPLEX,
           "propertyNames": {"pattern": "^[A-Za-z_][A-Za-z_0-9]*$"}}
_POINT = {"type": "array", "items": _NUMBER, "minItems": 2, "maxItems": 2}
_AXIS = {"type": "array", "prefixItems": [_NUMBER, _NUMBER, {"type": "integer", "minimum": 1}],
         "minItems": 3, "maxItems": 3}
_GRID = {"type": "object", "additionalProperties": False, "required": ["x", "y"],
         "properties": {"x": _AXIS, "y": _AXIS}}
_TOLS = {"type": "object", "additionalProperties": _NUMBER}

SUITES_2D = ("exprlang", "bicomplex", "fields", "pseudoanalytic", "transforms", "solver")
SUITES_3D = ("dirac", "factorization3d", "chain3d", "second_kind3d", "roundtrip3d")

SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "additionalProperties": False,
    "required": ["schema_version"],
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "name": {"type": "string"},
        "coefficients": {
            "type": "object", "additionalProperties": False, "required": ["p", "q", "u0"],
            "properties": {"p": _EXPR, "q": _EXPR, "u0": _EXPR, "params": _PARAMS,
                           "branch_confirmed": {"type": "boolean"}},
        },
        "conditionS": {
            "type": "object", "additionalProperties": False, "required": ["rho", "s", "S"],
            "properties": {"rho": _EXPR, "s": _EXPR, "S": _EXPR, "f_of_rho": _EXPR, "f": _EXPR,
                           "params": _PARAMS},
            "not": {"required": ["f_of_rho", "f"]},
        },
        "z0": _POINT,
        "domain": {
            "type": "object", "required": ["type"],
            "oneOf": [
                {"additionalProperties": False,
                 "properties": {"type": {"const": "disk"}, "center": _POINT,
                                "radius": {"type": "number", "exclusiveMinimum": 0}}},
                {"additionalProperties": False, "required": ["a", "b"],
                 "properties": {"type": {"const": "ellipse"}, "center": _POINT,
                                "a": {"type": "number", "exclusiveMinimum": 0},
                                "b": {"type": "number", "exclusiveMinimum": 0}}},
                {"additionalProperties": False, "required": ["r"],
                 "properties": {"type": {"const": "radial"}, "center": _POINT, "r": _EXPR,
                                "params": _PARAMS}},
            ],
        },
        "powers": {
            "type": "object", "additionalProperties": False, "required": ["n_max", "grid"],
            "properties": {"n_max": {"type": "integer", "minimum": 0, "maximum": 40}, "grid": _GRID},
        },
        "solve": {
            "type": "object", "additionalProperties": False, "required": ["boundary_data", "N"],
            "properties": {
                "boundary_data": _EXPR, "N": {"type": "integer", "minimum": 1},
                "M": {"type": "integer", "minimum": 1}, "exact": _EXPR,
                "max_order": {"type": "integer", "minimum": 0},
                "reference_max_error": {"type": "number", "exclusiveMinimum": 0},
                "grid": {"type": "object", "additionalProperties": False,
                         "properties": {"radii": {"type": "integer", "minimum": 1},
                                        "angles": {"type": "integer", "minimum": 3}}},
            },
        },
        "conjugate": {
            "type": "object", "additionalProperties": False, "required": ["u", "base", "grid"],
            "properties": {"u": _EXPR, "base": _POINT, "grid": _GRID,
                           "direction": {"enum": ["forward", "inverse"]}},
        },
        "verify": {
            "type": "object", "additionalProperties": False,
            "properties": {"suites": {"type": "array", "items": {"enum": list(SUITES_2D)}},
                           "seed": {"type": "integer"}, "tolerances": _TOLS},
        },
        "verify3d": {
            "type": "object", "additionalProperties": False,
            "properties": {"suites": {"type": "array", "items": {"enum": list(SUITES_3D)}},
                           "seed": {"type": "integer"}, "tolerances": _TOLS,
                           "f": _EXPR, "nu": _EXPR, "g": _EXPR, "params": _PARAMS,
                           "box": {"type": "number", "exclusiveMinimum": 0}},
        },
    },
}

DEFAULT_MAX_ORDER = 16


@dataclass
class Tolerances:
    """Acceptance thresholds; every field can be overridden by name."""

    quadrature_rtol: float = 1e-11
    compatibility: float = 1e-7
    residual: float = 1e-6
    sequence: float = 1e-8
    condition_s: float = 1e-8
    linearity: float = 1e-10
    slope_margin: float = 0.9
    factorization: float = 1e-9
    second_kind_2d: float = 1e-7
    second_kind_3d: float = 1e-8
    chain_3d: float = 1e-8
    round_trip: float = 1e-8
    uniqueness: float = 1e-9
    identity: float = 1e-12
    ad_first: float = 1e-8
    ad_second: float = 1e-5
    antiderivative: float = 1e-9
    path_independence: float = 1e-10
    unit_recovery: float = 1e-10
    rank_threshold: float = 1e14

    def override(self, items):
        """Apply ``{name: value}`` overrides; unknown names are a config error."""
        names = {f.name for f in dataclasses.fields(self)}
        for key, value in items.items():
            if key not in names:
                raise ConfigError(f"unknown tolerance {key!r}; known: {', '.join(sorted(names))}")
            try:
                setattr(self, key, float(value))
            except ValueError:
                raise ConfigError(f"tolerance {key!r} must be a number, got {value!r}") from None
        return self

    def as_dict(self):
        return dataclasses.asdict(self)


def parse_overrides(pairs):
    out = {}
    for pair in pairs or ():
        key, sep, value = pair.partition("=")
        if not sep or not key:
            raise ConfigError(f"--tol-override expects KEY=VAL, got {pair!r}")
        out[key.strip()] = value.strip()
    return out


def _format_path(path):
    return "".join(f"[{p}]" if isinstance(p, int) else f".{p}" for p in path) or "<root>"


def validate(doc):
    validator = jsonschema.Draft202012Validator(SCHEMA)
    errors = sorted(validator.iter_errors(doc), key=lambda e: list(e.absolute_path))
    if errors:
        e = errors[0]
        raise ConfigError(f"config error at {_format_path(e.absolute_path)}: {e.message}")
    return doc


def load(path):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from None
    return validate(doc)


def preset_names():
    return sorted(p.name[:-5] for p in resources.files("vekua.presets").iterdir()
                  if p.name.endswith(".json"))


def load_preset(name):
    try:
        text = resources.files("vekua.presets").joinpath(f"{name}.json").read_text(encoding="utf-8")
    except FileNotFoundError:
        raise ConfigError(f"unknown preset {name!r}; available: {', '.join(preset_names())}") from None
    return validate(json.loads(text))


def _complex_params(params):
    out = {}
    for k, v in (params or {}).items():
        out[k] = complex(v[0], v[1]) if isinstance(v, list) else complex(v)
    return out


def require(doc, *keys):
    for key in keys:
        if key not in doc:
            raise ConfigError(f"config error at <root>: '{key}' is a required property for this command")


def build_coefficients(doc):
    c = doc["coefficients"]
    try:
        return EllipticCoefficients.from_exprs(c["p"], c["q"], c["u0"], _complex_params(c.get("params")),
                                               branch_confirmed=c.get("branch_confirmed", False))
    except VekuaError as exc:
        raise ConfigError(f"coefficients: {exc}") from None


def build_condition_s(doc, coeffs=None, check_grid=None):
    """Condition S data; ``f`` defaults to ``sqrt(p) u0`` when not given explicitly."""
    cs = doc["conditionS"]
    params = dict(_complex_params(doc.get("coefficients", {}).get("params")))
    params.update(_complex_params(cs.get("params")))
    try:
        if "f_of_rho" in cs or "f" in cs:
            data = ConditionSData(cs["rho"], cs["s"], cs["S"], cs.get("f_of_rho"), cs.get("f"), params)
            data.f_field()  # parse now so syntax errors surface as config errors
        elif coeffs is not None:
            data = ConditionSData(cs["rho"], cs["s"], cs["S"], None, coeffs.f, params)
        else:
            raise ConfigError("conditionS needs 'f_of_rho' or 'f' when no coefficients are given")
        data.rho_field()
        data._univariate(data.s)
        data._univariate(data.S)
    except VekuaError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"conditionS: {exc}") from None
    explicit = "f_of_rho" in cs or "f" in cs
    if explicit and coeffs is not None and check_grid is not None:
        x, y = check_grid
        a = data.f_field()(x, y)
        b = coeffs.f(x, y)
        if np.max(np.abs(a - b)) > 1e-10 * max(1.0, float(np.max(np.abs(b)))):
            raise ConfigError("conditionS f disagrees with sqrt(p) u0 from coefficients")
    return data


def build_domain(doc):
    d = doc.get("domain", {"type": "disk"})
    center = tuple(d.get("center", (0.0, 0.0)))
    if d["type"] == "disk":
        return Domain.disk(d.get("radius", 1.0), center)
    if d["type"] == "ellipse":
        return Domain.ellipse(d["a"], d["b"], center)
    return Domain.radial(d["r"], center, _complex_params(d.get("params")))


def z0_of(doc, domain=None):
    if "z0" in doc:
        return tuple(doc["z0"])
    return tuple(domain.center) if domain is not None else (0.0, 0.0)


def grid_points(axes):
    """Tensor grid from ``{"x": [min, max, n], "y": [min, max, n]}``, row-major in y then x."""
    xs = np.linspace(*axes["x"][:2], int(axes["x"][2]))
    ys = np.linspace(*axes["y"][:2], int(axes["y"][2]))
    X, Y = np.meshgrid(xs, ys)
    return X.ravel(), Y.ravel()


def scalar(expr, doc, ndim=2, extra=None):
    params = dict(_complex_params(doc.get("coefficients", {}).get("params")))
    params.update(_complex_params(doc.get("conditionS", {}).get("params")))
    params.update(_complex_params(extra))
    try:
        return ScalarField.from_expr(expr, params, ndim)
    except VekuaError as exc:
        raise ConfigError(f"expression {expr!r}: {exc}") from None

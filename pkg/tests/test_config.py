import json

import pytest

from vekua import config
from vekua.errors import ConfigError


def test_all_presets_validate():
    names = config.preset_names()
    assert {"helmholtz_powers", "verify_default", "verify3d_default", "corrupted_radial"} <= set(names)
    for name in names:
        config.load_preset(name)


def test_missing_key_is_named():
    doc = config.load_preset("helmholtz_powers")
    del doc["conditionS"]["rho"]
    with pytest.raises(ConfigError, match="rho"):
        config.validate(doc)


def test_unknown_key_is_rejected():
    doc = config.load_preset("helmholtz_powers")
    doc["powers"]["nmax"] = 3
    with pytest.raises(ConfigError, match="nmax"):
        config.validate(doc)


def test_unknown_preset():
    with pytest.raises(ConfigError, match="available"):
        config.load_preset("nope")


def test_load_from_file(tmp_path):
    p = tmp_path / "c.json"
    p.write_text(json.dumps(config.load_preset("conjugate_harmonic")))
    assert config.load(p)["conjugate"]["u"] == "x^2 - y^2"
    p.write_text("{not json")
    with pytest.raises(ConfigError):
        config.load(p)


def test_tolerance_overrides():
    tol = config.Tolerances().override(config.parse_overrides(["residual=1e-3"]))
    assert tol.residual == 1e-3
    with pytest.raises(ConfigError):
        config.Tolerances().override({"bogus": 1})
    with pytest.raises(ConfigError):
        config.parse_overrides(["residual"])


def test_explicit_f_must_match_coefficients():
    doc = config.load_preset("helmholtz_powers")
    doc["conditionS"]["f_of_rho"] = "exp(2*rho)"
    coeffs = config.build_coefficients(doc)
    with pytest.raises(ConfigError, match="disagrees"):
        config.build_condition_s(doc, coeffs, config.grid_points(doc["powers"]["grid"]))


def test_bad_expression_is_config_error():
    doc = config.load_preset("helmholtz_powers")
    doc["coefficients"]["q"] = "-c^^2"
    with pytest.raises(ConfigError):
        config.build_coefficients(doc)

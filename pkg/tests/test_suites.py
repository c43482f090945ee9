from vekua import config
from vekua.suites import Check, run_suites


def test_check_semantics():
    assert Check("a", 1e-9, 1e-8).passed
    assert not Check("a", float("nan"), 1e-8).passed
    assert Check("s", 3.0, 2.9, ">=").passed


def test_radial_preset_suites():
    doc = config.load_preset("radial_powers")
    report = run_suites(doc, ["fields", "pseudoanalytic", "transforms"], seed=3)
    assert report["passed"], report


def test_tolerance_tightening_fails():
    doc = config.load_preset("verify3d_default")
    tol = config.Tolerances().override({"identity": 0.0, "factorization": 1e-30})
    report = run_suites(doc, ["factorization3d"], tol=tol)
    assert not report["passed"]

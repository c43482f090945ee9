import csv
import json

import numpy as np
import pytest

from conftest import helmholtz_closed_forms
from vekua import config
from vekua.cli import main


def write(tmp_path, doc, name="run.json"):
    p = tmp_path / name
    p.write_text(json.dumps(doc))
    return str(p)


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def test_powers_match_closed_forms(tmp_path):
    doc = config.load_preset("helmholtz_powers")
    doc["powers"]["n_max"] = 2
    assert main(["powers", "--config", write(tmp_path, doc), "--out", str(tmp_path / "o")]) == 0
    rows = read_csv(tmp_path / "o" / "powers.csv")
    assert len(rows) == 3 * 2 * 100
    worst = 0.0
    for r in rows:
        x, y = float(r["x"]), float(r["y"])
        sc, vec = helmholtz_closed_forms(x, y)[(int(r["n"]), r["seed"])]
        worst = max(worst, abs(float(r["Sc_re"]) - sc), abs(float(r["Vec_re"]) - vec))
    assert worst < 1e-10
    summary = json.loads((tmp_path / "o" / "powers_summary.json").read_text())
    assert summary


def test_powers_classical(tmp_path):
    assert main(["powers", "--config", "preset:classical_powers", "--out", str(tmp_path)]) == 0
    for r in read_csv(tmp_path / "powers.csv"):
        if r["seed"] != "1":
            continue
        z = complex(float(r["x"]), float(r["y"])) ** int(r["n"])
        assert abs(float(r["Sc_re"]) - z.real) < 1e-12 and abs(float(r["Vec_re"]) - z.imag) < 1e-12


def test_missing_key_exit_code(tmp_path, capsys):
    doc = config.load_preset("helmholtz_powers")
    del doc["conditionS"]["rho"]
    assert main(["powers", "--config", write(tmp_path, doc), "--out", str(tmp_path)]) == 1
    assert "rho" in capsys.readouterr().err


def test_determinism_across_runs_and_threads(tmp_path):
    doc = config.load_preset("helmholtz_powers")
    doc["powers"] = {"n_max": 3, "grid": {"x": [-0.9, 0.9, 30], "y": [-0.9, 0.9, 30]}}
    path = write(tmp_path, doc)
    outs = []
    for i, threads in enumerate(("1", "1", "4")):
        out = tmp_path / f"o{i}"
        assert main(["powers", "--config", path, "--out", str(out), "--threads", threads]) == 0
        outs.append([(out / n).read_bytes() for n in ("powers.csv", "powers_summary.json")])
    assert outs[0] == outs[1] == outs[2]


def test_solve_unit_vector(tmp_path):
    doc = config.load_preset("verify_default")
    doc["solve"] = {"boundary_data": "exp(y)", "N": 9}
    assert main(["solve", "--config", write(tmp_path, doc), "--out", str(tmp_path)]) == 0
    coef = [float(r["coef_re"]) for r in read_csv(tmp_path / "solve_coefficients.csv")]
    assert np.max(np.abs(np.array(coef) - np.eye(9)[0])) < 1e-10


def test_solve_order_limit(tmp_path, capsys):
    doc = config.load_preset("verify_default")
    doc["solve"] = {"boundary_data": "exp(x)", "N": 41, "max_order": 16}
    assert main(["solve", "--config", write(tmp_path, doc), "--out", str(tmp_path)]) == 1
    assert "order" in capsys.readouterr().err


def test_conjugate(tmp_path):
    assert main(["conjugate", "--config", "preset:conjugate_harmonic", "--out", str(tmp_path)]) == 0
    rows = read_csv(tmp_path / "conjugate.csv")
    x = np.array([float(r["x"]) for r in rows])
    y = np.array([float(r["y"]) for r in rows])
    v = np.array([float(r["v_re"]) for r in rows])
    d = v - 2 * x * y
    assert np.max(np.abs(d - d.mean())) < 1e-9


def test_verify_corrupted_preset(tmp_path, capsys):
    assert main(["verify", "--config", "preset:corrupted_radial", "--out", str(tmp_path)]) == 1
    report = json.loads((tmp_path / "verify_report.json").read_text())
    assert not report["passed"]
    assert "ConditionSViolation" in json.dumps(report)


def test_verify3d_default(tmp_path):
    assert main(["verify3d", "--out", str(tmp_path / "a")]) == 0
    assert main(["verify3d", "--out", str(tmp_path / "b")]) == 0
    a = (tmp_path / "a" / "verify3d_report.json").read_bytes()
    assert a == (tmp_path / "b" / "verify3d_report.json").read_bytes()
    assert json.loads(a)["passed"]


def test_unknown_tolerance(tmp_path):
    assert main(["verify3d", "--out", str(tmp_path), "--tol-override", "bogus=1"]) == 1


def test_verify_default_passes(tmp_path, capsys):
    assert main(["verify", "--out", str(tmp_path)]) == 0
    report = json.loads((tmp_path / "verify_report.json").read_text())
    assert report["passed"] and len(report["suites"]) == 6
    assert capsys.readouterr().out.count("PASS") == 6

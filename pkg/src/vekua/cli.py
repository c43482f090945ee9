"""Command-line front end.

    vekua powers    --config run.json --out DIR
    vekua solve     --config run.json --out DIR
    vekua conjugate --config run.json --out DIR
    vekua verify    [--config run.json] --out DIR [--seed N]
    vekua verify3d  [--config run.json] --out DIR [--seed N]

Exit codes: 0 success, 1 error or failed verification, 2 success with warnings.
Numbers are written with 17 significant digits; output depends only on the
configuration and seed (evaluation is chunked identically for any thread count).
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import math
import sys
import warnings
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import config as cfg
from .bicomplex import Bicomplex
from .errors import ConfigError, RankDeficient, VekuaError
from .fields import as_coords, dzbar_jet
from .pseudoanalytic import SEEDS, PowerTable, build_sequence_condition_s
from .solver import CompleteSystem, DirichletProblem, solve_collocation
from .suites import run_suites
from .transforms import associated_operator, conjugate_solution, inverse_conjugate

log = logging.getLogger("vekua")

CHUNK = 256
EXIT_OK, EXIT_ERROR, EXIT_WARN = 0, 1, 2


# ---------- output formatting ----------

def fmt(v):
    """17 significant digits; non-finite values become ``nan``/``inf`` strings."""
    v = float(v)
    if math.isnan(v):
        return "nan"
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return "%.17g" % v


def _json_value(v, indent, level):
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if isinstance(v, dict):
        if not v:
            return "{}"
        items = [f'{pad}{_json_str(str(k))}: {_json_value(x, indent, level + 1)}' for k, x in v.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(v, (list, tuple, np.ndarray)):
        v = list(v)
        if not v:
            return "[]"
        if all(not isinstance(x, (dict, list, tuple, np.ndarray)) for x in v):
            return "[" + ", ".join(_json_value(x, indent, level + 1) for x in v) + "]"
        return "[\n" + ",\n".join(pad + _json_value(x, indent, level + 1) for x in v) + "\n" + end + "]"
    if v is None:
        return "null"
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (complex, np.complexfloating)):
        return f"[{_json_value(v.real, indent, level)}, {_json_value(v.imag, indent, level)}]"
    if isinstance(v, (float, np.floating)):
        return fmt(v) if math.isfinite(v) else "null"
    return _json_str(str(v))


def _json_str(s):
    return json.dumps(s, ensure_ascii=False)


def write_json(path, obj):
    Path(path).write_text(_json_value(obj, 2, 0) + "\n", encoding="utf-8")


def write_csv(path, header, rows):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([fmt(c) if isinstance(c, (float, np.floating)) else c for c in row])


def _stats(values):
    a = np.abs(np.asarray(values)).ravel()
    return {"max": float(np.max(a)), "rms": float(np.sqrt(np.mean(a ** 2)))} if a.size else {}


# ---------- chunked evaluation ----------

def chunked(fn, x, y, threads=1):
    """Apply ``fn(x_chunk, y_chunk)`` over fixed-size chunks; results in input order."""
    x, y = np.asarray(x, dtype=float).ravel(), np.asarray(y, dtype=float).ravel()
    bounds = [(i, min(i + CHUNK, x.size)) for i in range(0, x.size, CHUNK)]
    if threads > 1 and len(bounds) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(lambda b: fn(x[b[0]:b[1]], y[b[0]:b[1]]), bounds))
    return [fn(x[a:b], y[a:b]) for a, b in bounds]


# ---------- commands ----------

def _tolerances(doc, section, overrides):
    tol = cfg.Tolerances()
    tol.override(doc.get(section, {}).get("tolerances", {}))
    tol.override(overrides)
    return tol


def cmd_powers(doc, out, args, tol):
    cfg.require(doc, "coefficients", "conditionS", "powers")
    coeffs = cfg.build_coefficients(doc)
    x, y = cfg.grid_points(doc["powers"]["grid"])
    cs = cfg.build_condition_s(doc, coeffs, (x, y))
    seq = build_sequence_condition_s(cs, (x, y), tol.condition_s, tol.sequence)
    z0 = cfg.z0_of(doc)
    n_max = doc["powers"]["n_max"]

    def work(xc, yc):
        table = PowerTable(seq, z0, n_max, xc, yc, rtol=tol.quadrature_rtol)
        jets = table.jets(1)
        fj = seq.f._func(as_coords((xc, yc), 2), 1)
        inv = fj.truncate(0).reciprocal()
        b = Bicomplex(0.5 * fj.d(0) * inv, 0.5 * fj.d(1) * inv)
        res = []
        for W in jets:
            r = (dzbar_jet(W) - Bicomplex(W.sc.truncate(0), -W.vec.truncate(0)) * b).values()
            res.append(r.magnitude() / np.maximum(1.0, W.values().magnitude()))
        return table.values, res

    parts = chunked(work, x, y, args.threads)
    rows = []
    summary = {}
    for n in range(n_max + 1):
        for s, seed in enumerate(SEEDS):
            sc = np.concatenate([p[0][n].sc[s] for p in parts])
            vec = np.concatenate([p[0][n].vec[s] for p in parts])
            for i in range(x.size):
                rows.append((fmt(x[i]), fmt(y[i]), n, seed, fmt(sc[i].real), fmt(sc[i].imag),
                             fmt(vec[i].real), fmt(vec[i].imag)))
            res = np.concatenate([p[1][n][s] for p in parts])
            summary[f"n={n},seed={seed}"] = {"vekua_residual": _stats(res)}
    write_csv(out / "powers.csv", ["x", "y", "n", "seed", "Sc_re", "Sc_im", "Vec_re", "Vec_im"], rows)
    write_json(out / "powers_summary.json", {
        "name": doc.get("name"), "z0": list(z0), "n_max": n_max, "points": int(x.size),
        "residuals": summary,
    })
    print(f"wrote {out / 'powers.csv'} ({len(rows)} rows)")
    return EXIT_OK


def _solve_problem(doc, N=None):
    coeffs = cfg.build_coefficients(doc)
    domain = cfg.build_domain(doc)
    grid = domain.interior_grid(10, 32)
    cs = cfg.build_condition_s(doc, coeffs, grid)
    s = doc["solve"]
    g = cfg.scalar(s["boundary_data"], doc)
    sgrid = s.get("grid", {})
    extra = {}
    if "radii" in sgrid:
        extra["grid_radii"] = sgrid["radii"]
    if "angles" in sgrid:
        extra["grid_angles"] = sgrid["angles"]
    return DirichletProblem(coeffs, cs, domain, g, N or s["N"], s.get("M"), cfg.z0_of(doc, domain), **extra)


def cmd_solve(doc, out, args, tol):
    cfg.require(doc, "coefficients", "conditionS", "solve")
    s = doc["solve"]
    max_order = s.get("max_order", cfg.DEFAULT_MAX_ORDER)
    if (s["N"] - 1) // 2 > max_order:
        raise ConfigError(f"config error at .solve.N: N={s['N']} needs formal powers of order "
                          f"{(s['N'] - 1) // 2}, above max_order={max_order}")
    problem = _solve_problem(doc)
    system = CompleteSystem(problem, rtol=tol.quadrature_rtol, solution_tol=tol.residual,
                            condition_s_tol=tol.condition_s, sequence_tol=tol.sequence)
    if system.n_max > max_order:
        raise ConfigError(f"basis needs formal powers of order {system.n_max}, above max_order={max_order}")
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", RankDeficient)
        sol = solve_collocation(problem, system, rank_threshold=tol.rank_threshold)
    rank_warn = [str(w.message) for w in caught if issubclass(w.category, RankDeficient)]

    write_csv(out / "solve_coefficients.csv", ["index", "n", "seed", "coef_re", "coef_im"],
              [(i, m.n, m.seed, fmt(np.real(c)), fmt(np.imag(c)))
               for i, (m, c) in enumerate(zip(sol.members, sol.coefficients))])
    bx, by = problem.domain.collocation_points(problem.collocation_count)
    fit = sol(bx, by)
    data = problem.boundary_data(bx, by)
    theta = 2 * np.pi * np.arange(bx.size) / bx.size
    write_csv(out / "solve_boundary.csv", ["theta", "x", "y", "data", "fit", "residual"],
              [(fmt(t), fmt(a), fmt(b), fmt(np.real(d)), fmt(np.real(f)), fmt(abs(f - d)))
               for t, a, b, d, f in zip(theta, bx, by, data, fit)])
    report = {
        "name": doc.get("name"), "N": system.N, "M": problem.collocation_count, "z0": list(problem.z0),
        "members": [f"n={m.n},seed={m.seed}" for m in sol.members],
        "condition_number": sol.condition_number,
        "boundary_residual": {"max": sol.residual_max, "rms": sol.residual_rms},
        "warnings": rank_warn,
    }
    if "exact" in s:
        exact = cfg.scalar(s["exact"], doc)
        gx, gy = problem.domain.interior_grid(problem.grid_radii, problem.grid_angles)
        approx = np.concatenate(chunked(sol, gx, gy, args.threads))
        ref = exact(gx, gy)
        err = np.abs(approx - ref)
        write_csv(out / "solve_errors.csv", ["x", "y", "approx", "exact", "error"],
                  [(fmt(a), fmt(b), fmt(np.real(p)), fmt(np.real(q)), fmt(e))
                   for a, b, p, q, e in zip(gx, gy, approx, ref, err)])
        report["max_error"] = float(np.max(err))
        report["rms_error"] = float(np.sqrt(np.mean(err ** 2)))
        report["reference_max_error"] = s.get("reference_max_error")
    write_json(out / "solve_report.json", report)
    summary = f"N={system.N} M={problem.collocation_count} cond={sol.condition_number:.3e}"
    if "max_error" in report:
        summary += f" max_error={report['max_error']:.3e}"
    print(summary)
    for w in rank_warn:
        print(f"warning: {w}", file=sys.stderr)
    return EXIT_WARN if rank_warn else EXIT_OK


def cmd_conjugate(doc, out, args, tol):
    cfg.require(doc, "coefficients", "conjugate")
    coeffs = cfg.build_coefficients(doc)
    c = doc["conjugate"]
    x, y = cfg.grid_points(c["grid"])
    coeffs.validate((x, y), tol.residual)
    base = tuple(c["base"])
    given = cfg.scalar(c["u"], doc)
    inverse = c.get("direction", "forward") == "inverse"
    if inverse:
        result = inverse_conjugate(given, coeffs, base)
        back = conjugate_solution(result, coeffs, base)
        equation = coeffs.operator(result)
        cls = coeffs.u0.reciprocal()
    else:
        result = conjugate_solution(given, coeffs, base)
        back = inverse_conjugate(result, coeffs, base)
        equation = associated_operator(coeffs, result)
        cls = coeffs.u0

    def work(xc, yc):
        return given(xc, yc), result(xc, yc), back(xc, yc), equation(xc, yc), cls(xc, yc)

    parts = chunked(work, x, y, args.threads)
    g, r, b, eq, w = (np.concatenate([p[i] for p in parts]) for i in range(5))
    # round trip recovers the input up to a constant multiple of u0 (or 1/u0)
    d = b - g
    const = np.vdot(w, d) / np.vdot(w, w)
    dev = np.abs(d - const * w)
    names = ("v", "u") if not inverse else ("u", "v")
    write_csv(out / "conjugate.csv",
              ["x", "y", f"{names[1]}_re", f"{names[1]}_im", f"{names[0]}_re", f"{names[0]}_im"],
              [(fmt(a), fmt(bb), fmt(p.real), fmt(p.imag), fmt(q.real), fmt(q.imag))
               for a, bb, p, q in zip(x, y, g, r)])
    write_json(out / "conjugate_report.json", {
        "name": doc.get("name"), "direction": "inverse" if inverse else "forward", "base": list(base),
        "points": int(x.size),
        "equation_residual": _stats(eq),
        "round_trip": {"constant": complex(const), "max_deviation": float(np.max(dev))},
    })
    print(f"wrote {out / 'conjugate.csv'} ({x.size} rows); round-trip deviation {np.max(dev):.3e}")
    return EXIT_OK


def _verify(doc, out, args, tol, section, all_suites, filename):
    sec = doc.get(section, {})
    names = sec.get("suites", list(all_suites))
    seed = args.seed if args.seed is not None else sec.get("seed", 0)
    report = run_suites(doc, names, seed, tol)
    report["name"] = doc.get("name")
    report["tolerances"] = tol.as_dict()
    write_json(out / filename, report)
    for s in report["suites"]:
        state = "PASS" if s["passed"] else "FAIL"
        detail = f" ({s['error']})" if s["error"] else ""
        print(f"{state} {s['suite']}{detail}")
        for c in s["checks"]:
            if not c["passed"]:
                print(f"    {c['name']}: {c['value']:.3e} (threshold {c['mode']} {c['threshold']:.3e})")
    return EXIT_OK if report["passed"] else EXIT_ERROR


def cmd_verify(doc, out, args, tol):
    return _verify(doc, out, args, tol, "verify", cfg.SUITES_2D, "verify_report.json")


def cmd_verify3d(doc, out, args, tol):
    return _verify(doc, out, args, tol, "verify3d", cfg.SUITES_3D, "verify3d_report.json")


COMMANDS = {
    "powers": (cmd_powers, None, "formal powers on a grid (CSV + summary JSON)"),
    "solve": (cmd_solve, None, "Dirichlet problem by boundary collocation"),
    "conjugate": (cmd_conjugate, None, "conjugate solution of the associated equation"),
    "verify": (cmd_verify, "verify_default", "2D invariant suites (JSON report)"),
    "verify3d": (cmd_verify3d, "verify3d_default", "3D invariant suites (JSON report)"),
}


def build_parser():
    parser = argparse.ArgumentParser(prog="vekua", description="Pseudoanalytic formal powers, "
                                     "complete systems and factorized elliptic operators.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, default, help_text) in COMMANDS.items():
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", required=default is None,
                       help="JSON run configuration, or preset:NAME for a shipped preset"
                            + (f" (default: preset:{default})" if default else ""))
        p.add_argument("--out", default=".", help="output directory (created if missing)")
        p.add_argument("--seed", type=int, default=None, help="random seed for the verification suites")
        p.add_argument("--threads", type=int, default=1, help="worker threads for grid evaluation")
        p.add_argument("--tol-override", action="append", default=[], metavar="KEY=VAL",
                       help="override a named tolerance; may be repeated")
    return parser


def load_config(source):
    if source.startswith("preset:"):
        return cfg.load_preset(source[len("preset:"):])
    return cfg.load(source)


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    func, default, _ = COMMANDS[args.command]
    try:
        if args.threads < 1:
            raise ConfigError("--threads must be at least 1")
        doc = load_config(args.config or f"preset:{default}")
        section = args.command if args.command in ("verify", "verify3d") else None
        tol = _tolerances(doc, section, cfg.parse_overrides(args.tol_override)) if section else \
            cfg.Tolerances().override(cfg.parse_overrides(args.tol_override))
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        return func(doc, out, args, tol)
    except VekuaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())

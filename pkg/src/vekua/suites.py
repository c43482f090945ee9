"""Verification suites: invariant checks with residual statistics.

Every suite takes a :class:`SuiteContext` and returns a list of :class:`Check`.
A suite that raises a library error is reported as failed with the error text,
so a bad configuration (for instance a wrong ``s(rho)``) fails loudly instead
of silently skipping checks.
"""

from __future__ import annotations

import math
import time
import zlib
from dataclasses import dataclass, field

import numpy as np

from . import config as cfg
from .bicomplex import Bicomplex, inverse
from .errors import VekuaError
from .fields import (BicomplexField, ScalarField, Segment, antiderivative_field, as_coords,
                     dz_field, dz_jet, dzbar_jet, line_integral)
from .jets import Jet
from .pseudoanalytic import (ConditionSData, FormalPower, build_sequence_condition_s,
                             fg_derivative, second_kind_residual, sequence_property_errors,
                             vekua_residual)
from .quat3d import (ComplexQuaternion, QuaternionField3D, dirac_jet, dirac_plus_residual, dirac_to_schr,
                     divpgradq_residual_3d, factorization_residual_3d, quartet, schr_to_dirac,
                     second_kind_residual_3d, vekua3d_residual)
from .solver import GRID_ANGLES, GRID_RADII, CompleteSystem, DirichletProblem, error_report, solve_collocation
from .transforms import (_div_weighted_grad, associated_operator, conjugate_solution,
                         factorization_residual_2d, manufactured_coefficients,
                         potentials_r1_r2)

# expressions with no singularities on [-2, 2]^2
SMOOTH_2D = (
    "exp(x) * sin(y) + x^3 * y",
    "sqrt(2 + x^2 + y^2)",
    "log(3 + cos(x * y))",
    "atan2(y + 3, 2 + x)",
    "sinh(x) * cosh(y) / (1 + x^2)",
    "(1 + i) * exp(x - 2*y) + i * x^2",
)


@dataclass
class Check:
    name: str
    value: float
    threshold: float
    mode: str = "<="

    @property
    def passed(self):
        if not math.isfinite(self.value):
            return False
        return self.value <= self.threshold if self.mode == "<=" else self.value >= self.threshold

    def as_dict(self):
        return {"name": self.name, "value": self.value, "threshold": self.threshold,
                "mode": self.mode, "passed": self.passed}


@dataclass
class SuiteContext:
    doc: dict
    tol: cfg.Tolerances
    seed: int = 0
    cache: dict = field(default_factory=dict)
    notes: dict = field(default_factory=dict)

    def note(self, suite, text):
        self.notes.setdefault(suite, []).append(text)

    def rng(self, name):
        return np.random.default_rng([self.seed, zlib.crc32(name.encode())])


def _rel(res, scale=1.0):
    res = res.value if isinstance(res, Jet) else res
    scale = scale.value if isinstance(scale, Jet) else scale
    return float(np.max(np.abs(res) / np.maximum(1.0, np.abs(scale))))


def _q_abs(q):
    """Pointwise magnitude of a Bicomplex or ComplexQuaternion of arrays."""
    return q.magnitude()


# ---------- problem setup shared by the 2D suites ----------

def _planar_doc(doc):
    if "coefficients" in doc and "conditionS" in doc:
        return doc
    base = cfg.load_preset("verify_default")
    merged = dict(base)
    merged.update({k: v for k, v in doc.items() if k in ("coefficients", "conditionS", "z0", "domain")})
    return merged


def _setup(ctx):
    if "setup" not in ctx.cache:
        doc = _planar_doc(ctx.doc)
        coeffs = cfg.build_coefficients(doc)
        domain = cfg.build_domain(doc if "domain" in doc else
                                  {"domain": {"type": "disk", "center": list(cfg.z0_of(doc)), "radius": 0.8}})
        z0 = cfg.z0_of(doc, domain)
        grid = domain.interior_grid(10, 24)
        cs = cfg.build_condition_s(doc, coeffs, grid)
        ctx.cache["setup"] = (doc, coeffs, cs, domain, z0, grid)
    return ctx.cache["setup"]


def _sequence(ctx):
    if "sequence" not in ctx.cache:
        _, _, cs, _, _, grid = _setup(ctx)
        t = ctx.tol
        ctx.cache["sequence"] = build_sequence_condition_s(cs, grid, t.condition_s, t.sequence)
    return ctx.cache["sequence"]


def _interior_points(domain, rng, count, shrink=0.9):
    theta = rng.uniform(0, 2 * np.pi, count)
    s = shrink * np.sqrt(rng.uniform(0.01, 1.0, count))
    bx, by = domain.boundary(theta)
    cx, cy = domain.center
    return cx + s * (bx - cx), cy + s * (by - cy)


def _random_polynomial(rng, coords, degree=3):
    """Random polynomial expression in ``coords`` with coefficients in [-1, 1]."""
    terms = []
    def monomials(n, d):
        if n == 0:
            yield ()
            return
        for k in range(d + 1):
            for rest in monomials(n - 1, d - k):
                yield (k,) + rest
    for powers in monomials(len(coords), degree):
        c = float(rng.uniform(-1, 1))
        factors = [f"{v}^{k}" for v, k in zip(coords, powers) if k]
        terms.append("*".join([f"({c!r})"] + factors))
    return " + ".join(terms)


# ---------- 2D suites ----------

def suite_exprlang(ctx):
    _, coeffs, cs, domain, _, _ = _setup(ctx)
    rng = ctx.rng("exprlang")
    x, y = _interior_points(domain, rng, 20)
    fields = [ScalarField.from_expr(e) for e in SMOOTH_2D] + [coeffs.p, coeffs.q, coeffs.u0, cs.f_field()]
    h = 1e-5
    first = second = 0.0
    for fld in fields:
        j = fld._func(as_coords((x, y), 2), 2)
        v = lambda dx, dy: fld(x + dx, y + dy)
        fd_x = (v(h, 0) - v(-h, 0)) / (2 * h)
        fd_y = (v(0, h) - v(0, -h)) / (2 * h)
        fd_xx = (v(h, 0) - 2 * v(0, 0) + v(-h, 0)) / h ** 2
        fd_yy = (v(0, h) - 2 * v(0, 0) + v(0, -h)) / h ** 2
        fd_xy = (v(h, h) - v(h, -h) - v(-h, h) + v(-h, -h)) / (4 * h ** 2)
        first = max(first, _rel(j.dx - fd_x, j.dx), _rel(j.dy - fd_y, j.dy))
        second = max(second, _rel(j.dxx - fd_xx, j.dxx), _rel(j.dyy - fd_yy, j.dyy),
                     _rel(j.dxy - fd_xy, j.dxy))
    lin = 0.0
    for _ in range(5):
        e1, e2 = rng.choice(len(SMOOTH_2D), 2, replace=False)
        a = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
        combo = ScalarField.from_expr(f"a*({SMOOTH_2D[e1]}) + ({SMOOTH_2D[e2]})", {"a": a})
        c = as_coords((x, y), 2)
        lhs = combo._func(c, 2).coef
        rhs = (a * ScalarField.from_expr(SMOOTH_2D[e1])._func(c, 2)
               + ScalarField.from_expr(SMOOTH_2D[e2])._func(c, 2)).coef
        lin = max(lin, _rel(lhs - rhs, rhs))
    t = ctx.tol
    return [Check("first_partials_vs_fd", first, t.ad_first),
            Check("second_partials_vs_fd", second, t.ad_second),
            Check("linearity", lin, t.identity)]


def suite_bicomplex(ctx):
    rng = ctx.rng("bicomplex")
    n = 200
    def rand():
        return Bicomplex(rng.normal(size=n) + 1j * rng.normal(size=n),
                         rng.normal(size=n) + 1j * rng.normal(size=n))
    a, b = rand(), rand()
    nn = a * a.conj()
    norm = float(np.max(np.abs(nn.sc - a.norm_sq())))
    vec = float(np.max(np.abs(nn.vec)))
    comm = float(np.max(_q_abs(a * b - b * a)))
    inv = inverse(a) * a
    inv_err = _rel(_q_abs(inv - Bicomplex(1.0 + 0j, 0j)), 0)
    return [Check("norm_scalar_part", norm, 0.0), Check("norm_vector_part", vec, 0.0),
            Check("commutativity", comm, 0.0), Check("inverse", inv_err, 1e-14)]


def suite_fields(ctx):
    _, _, _, domain, _, _ = _setup(ctx)
    rng = ctx.rng("fields")
    x, y = _interior_points(domain, rng, 20)
    base = tuple(domain.center)
    t = ctx.tol
    ft = 0.0
    for e in SMOOTH_2D[:3]:
        W = BicomplexField.from_components(ScalarField.from_expr(e))
        Phi = dz_field(W)
        phi = antiderivative_field(Phi, base, 0.0, "A", t.compatibility, t.quadrature_rtol)
        back = dz_field(BicomplexField.from_components(phi))(x, y)
        ref = Phi(x, y)
        ft = max(ft, _rel(_q_abs(back - ref), _q_abs(ref)))
    mixed = 0.0
    for e in SMOOTH_2D:
        j = ScalarField.from_expr(e)._func(as_coords((x, y), 2), 2)
        lhs = dz_jet(dzbar_jet(Bicomplex(j, 0 * j))).sc.value
        ref = 0.25 * j.laplacian().value
        mixed = max(mixed, _rel(lhs - ref, ref))
    loop = 0.0
    analytic = [BicomplexField.from_exprs("exp(x)*cos(y)", "exp(x)*sin(y)"),
                BicomplexField.from_exprs("x^3 - 3*x*y^2", "3*x^2*y - y^3")]
    for W in analytic:
        for _ in range(3):
            px, py = _interior_points(domain, rng, 3)
            v = list(zip(px, py))
            total = sum((line_integral(W, Segment(v[i], v[(i + 1) % 3])) for i in range(3)),
                        Bicomplex(0j, 0j))
            loop = max(loop, float(total.magnitude()))
    return [Check("antiderivative_then_dz", ft, t.antiderivative),
            Check("dz_dzbar_quarter_laplacian", mixed, t.identity),
            Check("closed_triangle_integral", loop, t.path_independence)]


def _powers(ctx, n_max=4):
    seq = _sequence(ctx)
    _, _, _, _, z0, _ = _setup(ctx)
    return seq, z0, [(n, a, FormalPower(seq, n, a, z0)) for n in range(n_max + 1)
                     for a in (Bicomplex(1 + 0j, 0j), Bicomplex(0j, 1 + 0j))]


def suite_pseudoanalytic(ctx):
    _, _, cs, domain, z0, _ = _setup(ctx)
    rng = ctx.rng("pseudoanalytic")
    t = ctx.tol
    seq = _sequence(ctx)
    x, y = _interior_points(domain, rng, 20)
    checks = [Check("successor_property", sequence_property_errors(seq, (x, y), m_max=2), t.sequence)]

    vk = 0.0
    for n, a, Z in _powers(ctx)[2]:
        W = Z.field
        val = W(x, y)
        vk = max(vk, _rel(_q_abs(vekua_residual(W, seq.f, (x, y))), _q_abs(val)))
    checks.append(Check("formal_powers_pseudoanalytic", vk, t.residual))

    lin = 0.0
    for n in range(4):
        a1 = complex(*rng.normal(size=2))
        a2 = complex(*rng.normal(size=2))
        Za = FormalPower(seq, n, Bicomplex(a1, a2), z0)(x, y)
        Z1 = FormalPower(seq, n, Bicomplex(1 + 0j, 0j), z0)(x, y)
        Zk = FormalPower(seq, n, Bicomplex(0j, 1 + 0j), z0)(x, y)
        ref = Z1 * a1 + Zk * a2
        lin = max(lin, _rel(_q_abs(Za - ref), _q_abs(ref)))
    checks.append(Check("linearity", lin, t.linearity))

    der = 0.0
    for n in range(1, 4):
        for a in (Bicomplex(1 + 0j, 0j), Bicomplex(0j, 1 + 0j)):
            d = fg_derivative(FormalPower(seq, n, a, z0).field, seq.pair(0), (x, y))
            ref = FormalPower(seq, n - 1, a, z0, m=1)(x, y) * n
            der = max(der, _rel(_q_abs(d - ref), _q_abs(ref)))
    checks.append(Check("derivative_relation", der, t.residual))

    radii = 2.0 ** -np.arange(3, 10)
    for n in range(4):
        worst = math.inf
        for a in (Bicomplex(1 + 0j, 0j), Bicomplex(0j, 1 + 0j)):
            for ang in rng.uniform(0, 2 * np.pi, 2):
                px, py = z0[0] + radii * np.cos(ang), z0[1] + radii * np.sin(ang)
                Z = FormalPower(seq, n, a, z0)(px, py)
                w = Bicomplex((px - z0[0]).astype(complex), (py - z0[1]).astype(complex)) ** n
                err = _q_abs(Z - w * a)
                slope = float(np.polyfit(np.log(radii), np.log(err), 1)[0])
                worst = min(worst, slope)
        checks.append(Check(f"asymptotic_slope_n{n}", worst, n + t.slope_margin, ">="))
    return checks


def suite_transforms(ctx):
    _, coeffs, _, domain, z0, _ = _setup(ctx)
    rng = ctx.rng("transforms")
    t = ctx.tol
    seq = _sequence(ctx)
    f = seq.f
    x, y = _interior_points(domain, rng, 50)
    c = as_coords((x, y), 2)
    r1, r2 = potentials_r1_r2(f)
    f2 = f * f
    sp_inv = coeffs.p.sqrt().reciprocal()
    chain = {k: 0.0 for k in ("schr1_sc", "schr2_vec", "div_f2_sc", "div_fm2_vec", "main_equation")}
    for n, a, Z in _powers(ctx, 3)[2]:
        W = Z.field
        W1, W2 = W.sc, W.vec
        j1 = W1._func(c, 2)
        j2 = W2._func(c, 2)
        scale = np.maximum(np.abs(j1.value), np.abs(j2.value))
        chain["schr1_sc"] = max(chain["schr1_sc"], _rel(-j1.laplacian() + r1._func(c, 0) * j1.truncate(0), scale))
        chain["schr2_vec"] = max(chain["schr2_vec"], _rel(-j2.laplacian() + r2._func(c, 0) * j2.truncate(0), scale))
        chain["div_f2_sc"] = max(chain["div_f2_sc"],
                                 _rel(_div_weighted_grad(f2._func(c, 1), (W1 / f)._func(c, 2)).value, scale))
        chain["div_fm2_vec"] = max(chain["div_fm2_vec"],
                                   _rel(_div_weighted_grad(f2.reciprocal()._func(c, 1), (W2 * f)._func(c, 2)).value,
                                        scale))
        chain["main_equation"] = max(chain["main_equation"],
                                     _rel(coeffs.operator(W1 * sp_inv)._func(c, 0).value, scale))
    checks = [Check(f"chain_{k}", v, t.residual) for k, v in chain.items()]

    # conjugate of a member of the complete system and its uniqueness class
    u = FormalPower(seq, 1, Bicomplex(1 + 0j, 0j), z0).field.sc * sp_inv
    xs, ys = x[:12], y[:12]
    v1 = conjugate_solution(u, coeffs, z0)
    other = (0.5 * (z0[0] + xs[0]), 0.5 * (z0[1] + ys[0]))
    v2 = conjugate_solution(u, coeffs, other)
    assoc = associated_operator(coeffs, v1)._func(as_coords((xs, ys), 2), 0).value
    checks.append(Check("associated_equation", _rel(assoc, v1(xs, ys)), t.residual))
    ratio = (v1(xs, ys) - v2(xs, ys)) * coeffs.u0(xs, ys)
    checks.append(Check("uniqueness_class", float(np.max(np.abs(ratio - np.mean(ratio)))), t.uniqueness))

    fact = 0.0
    sets = [coeffs, manufactured_coefficients("exp(x) * (2 + sin(y))", "2 + cos(x*y)")]
    for co in sets:
        for _ in range(10):
            phi = ScalarField.from_expr(_random_polynomial(rng, ("x", "y")))
            res = factorization_residual_2d(phi, co, (x, y))
            scale = co.operator(phi)(x, y)
            fact = max(fact, _rel(_q_abs(res), scale))
    checks.append(Check("factorization_2d", fact, t.factorization))

    sk = 0.0
    for n, a, Z in _powers(ctx, 3)[2]:
        W = Z.field
        sk = max(sk, _rel(_q_abs(second_kind_residual(W, f, (x, y))), _q_abs(W(x, y))))
    checks.append(Check("second_kind_form", sk, t.second_kind_2d))
    return checks


def suite_solver(ctx):
    doc, coeffs, cs, domain, z0, _ = _setup(ctx)
    rng = ctx.rng("solver")
    t = ctx.tol
    probe = DirichletProblem(coeffs, cs, domain, ScalarField.constant(0.0), 9, center=z0)
    system = CompleteSystem(probe, 9, rtol=t.quadrature_rtol)
    x, y = _interior_points(domain, rng, 50)
    basis = 0.0
    for u in system.basis_fields():
        res = coeffs.operator(u)(x, y)
        basis = max(basis, _rel(res, u(x, y)))
    checks = [Check("basis_solves_equation", basis, t.residual)]

    j = 3
    target = system.basis_fields()[j]
    unit = solve_collocation(DirichletProblem(coeffs, cs, domain, target, 9, center=z0), system,
                             rank_threshold=t.rank_threshold)
    e = np.zeros(9)
    e[j] = 1.0
    checks.append(Check("unit_recovery", float(np.max(np.abs(unit.coefficients - e))), t.unit_recovery))

    solve = doc.get("solve")
    if solve is None or "exact" not in solve:
        ctx.note("solver", "error_non_increasing_in_N skipped: no solve.exact in the configuration")
        return checks
    g = cfg.scalar(solve["boundary_data"], doc)
    exact = cfg.scalar(solve["exact"], doc)
    grid = solve.get("grid", {})
    errors = []
    for N in (5, 9, 13, 17, 21):
        pr = DirichletProblem(coeffs, cs, domain, g, N, center=z0,
                              grid_radii=grid.get("radii", GRID_RADII), grid_angles=grid.get("angles", GRID_ANGLES))
        sol = solve_collocation(pr, CompleteSystem(pr, N, validate=False, rtol=t.quadrature_rtol),
                                rank_threshold=t.rank_threshold)
        errors.append(error_report(sol, exact)["max_error"])
    increase = max(0.0, max(b - a for a, b in zip(errors, errors[1:])))
    checks.append(Check("error_non_increasing_in_N", increase, 0.0))
    return checks


# ---------- 3D suites ----------

def _setup3d(ctx):
    if "setup3d" not in ctx.cache:
        sec = dict(cfg.load_preset("verify3d_default")["verify3d"])
        sec.update(ctx.doc.get("verify3d", {}))
        params = cfg._complex_params(sec.get("params"))
        def s(e):
            return ScalarField.from_expr(e, params, 3)
        ctx.cache["setup3d"] = (s(sec["f"]), s(sec["nu"]), s(sec["g"]), float(sec.get("box", 1.0)))
    return ctx.cache["setup3d"]


def _box_points(rng, box, count):
    return tuple(rng.uniform(-box, box, count) for _ in range(3))


def _random_smooth_3d(rng):
    a = [float(v) for v in rng.uniform(-1, 1, 6)]
    return ScalarField.from_expr(
        f"exp(({a[0]!r})*x + ({a[1]!r})*y + ({a[2]!r})*z3) * cos(({a[3]!r})*x*y - z3)"
        f" + ({a[4]!r})*x^2*y*z3 + sin(y + ({a[5]!r})*z3)", None, 3)


def _nu_of(f):
    return ScalarField(lambda c, o: f._func(c, o + 2).laplacian() / f._func(c, o), 3)


def suite_dirac(ctx):
    _, _, _, box = _setup3d(ctx)
    rng = ctx.rng("dirac")
    pts = as_coords(_box_points(rng, box, 20), 3)
    sq = lb = 0.0
    for _ in range(20):
        g = _random_smooth_3d(rng)
        gj = g._func(pts, 2)
        DD = dirac_jet(dirac_jet(ComplexQuaternion.coerce(gj))).values()
        lap = gj.laplacian().value
        sq = max(sq, _rel(_q_abs(DD + ComplexQuaternion(lap)), lap))
        P0 = _random_smooth_3d(rng)._func(pts, 1)
        Q = ComplexQuaternion(*(_random_smooth_3d(rng)._func(pts, 1) for _ in range(4)))
        lhs = dirac_jet(Q * P0)
        Q0 = ComplexQuaternion(*(c.truncate(0) for c in Q.components))
        rhs = dirac_jet(ComplexQuaternion.coerce(P0)) * Q0 + dirac_jet(Q) * P0.truncate(0)
        lb = max(lb, _rel((lhs - rhs).magnitude(), lhs.magnitude()))
    t = ctx.tol
    return [Check("D_squared_is_minus_laplacian", sq, t.identity),
            Check("scalar_leibniz_rule", lb, t.identity)]


def suite_factorization3d(ctx):
    f, nu, _, box = _setup3d(ctx)
    rng = ctx.rng("factorization3d")
    t = ctx.tol
    pts = _box_points(rng, box, 20)
    c = as_coords(pts, 3)
    nu_err = _rel(_nu_of(f)(*pts) - nu(*pts), nu(*pts))
    fac = mp = 0.0
    manuf = manufactured_coefficients("exp(x)", "exp(z3)", ndim=3)
    for _ in range(10):
        g = ScalarField.from_expr(_random_polynomial(rng, ("x", "y", "z3")), None, 3)
        gj = g._func(c, 2)
        scale = np.abs(gj.laplacian().value) + np.abs(nu(*pts) * gj.value)
        fac = max(fac, _rel(_q_abs(factorization_residual_3d(g, f, nu, pts)), scale))
        res = divpgradq_residual_3d(g, manuf, None, None, pts)
        mp = max(mp, _rel(_q_abs(res), manuf.operator(g)(*pts)))
    return [Check("nu_equals_lap_f_over_f", nu_err, t.factorization),
            Check("factorization_schrodinger", fac, t.factorization),
            Check("factorization_div_p_grad_q", mp, t.factorization)]


def lift_planar(W):
    """Quaternion field ``W1 - W2 k`` from a planar bicomplex field ``W1 + W2 k``."""
    W = BicomplexField.coerce(W)

    def func(c, o):
        Wj = W._func((c[0], c[1]), o)
        sc, vec = Wj.sc.embed(3), Wj.vec.embed(3)
        z = 0 * sc
        return ComplexQuaternion(sc, z, z, -vec)

    return QuaternionField3D(func, label="lifted")


def _helmholtz_lift(n_max=3):
    data = ConditionSData("y", "0", "0", "exp(rho)")
    xs, ys = np.meshgrid(np.linspace(-1, 1, 7), np.linspace(-1, 1, 7))
    seq = build_sequence_condition_s(data, (xs.ravel(), ys.ravel()))
    f3 = ScalarField.from_expr("exp(y)", None, 3)
    out = []
    for n in range(n_max + 1):
        for a in (Bicomplex(1 + 0j, 0j), Bicomplex(0j, 1 + 0j)):
            out.append(FormalPower(seq, n, a, (0.0, 0.0)).field)
    return f3, out


def _quartet_combos(f, rng, count=4):
    basis = quartet(f)
    out = []
    for _ in range(count):
        cs = rng.normal(size=4) + 1j * rng.normal(size=4)
        W = basis[0] * complex(cs[0])
        for b, cc in zip(basis[1:], cs[1:]):
            W = W + b * complex(cc)
        out.append((W, cs))
    return out


def _chain_residuals(W, f, pts):
    c = as_coords(pts, 3)
    Wj = QuaternionField3D.coerce(W)._func(c, 2)
    fj = f._func(c, 2)
    scale = Wj.values().magnitude()
    main, div, rot = vekua3d_residual(W, f, pts, system=True)
    W0 = Wj.q0
    nu = fj.laplacian() / fj.truncate(0)
    schr = -W0.laplacian() + nu * W0.truncate(0)
    h = W0 / fj
    scpart = _div_weighted_grad((fj * fj).truncate(1), h)
    fw = ComplexQuaternion.vector(*(fj * v for v in Wj.vec))
    rot1 = dirac_jet(fw)
    inv2 = (fj * fj).truncate(1).reciprocal()
    inner = ComplexQuaternion.vector(rot1.q1 * inv2, rot1.q2 * inv2, rot1.q3 * inv2)
    vecpart = dirac_jet(inner)
    vec_only = ComplexQuaternion(0 * vecpart.q0.value, vecpart.q1.value, vecpart.q2.value, vecpart.q3.value)
    return {
        "vekua_main": _rel(_q_abs(main), scale),
        "vekua_div": _rel(div, scale),
        "vekua_rot": _rel(_q_abs(rot), scale),
        "scalar_schrodinger": _rel(schr.value, scale),
        "scalar_divergence_form": _rel(scpart.value, scale),
        "vector_rot_form": _rel(_q_abs(vec_only), scale),
    }


def suite_chain3d(ctx):
    f, _, _, box = _setup3d(ctx)
    rng = ctx.rng("chain3d")
    pts = _box_points(rng, box, 20)
    worst = {}
    cases = [(W, f) for W, _ in _quartet_combos(f, rng)]
    cases += [(q, f) for q in quartet(f)]
    f3, planar = _helmholtz_lift()
    lifted_pts = _box_points(rng, 0.9, 20)
    for W, ff in cases:
        for k, v in _chain_residuals(W, ff, pts).items():
            worst[k] = max(worst.get(k, 0.0), v)
    lifted = {}
    for Wp in planar:
        for k, v in _chain_residuals(lift_planar(Wp), f3, lifted_pts).items():
            lifted[k] = max(lifted.get(k, 0.0), v)
    t = ctx.tol
    return ([Check(f"quartet_{k}", v, t.chain_3d) for k, v in worst.items()]
            + [Check(f"lifted_power_{k}", v, t.chain_3d) for k, v in lifted.items()])


def suite_second_kind3d(ctx):
    f, _, _, box = _setup3d(ctx)
    rng = ctx.rng("second_kind3d")
    pts = _box_points(rng, box, 20)
    t = ctx.tol
    q = 0.0
    for W, cs in _quartet_combos(f, rng):
        w = QuaternionField3D.coerce(ComplexQuaternion(*(complex(c) for c in cs)))
        q = max(q, _rel(_q_abs(second_kind_residual_3d(w, f, pts)), 1.0))
        q = max(q, _rel(_q_abs(vekua3d_residual(W, f, pts)), _q_abs(W(*pts))))
    f3, planar = _helmholtz_lift()
    lp = _box_points(rng, 0.9, 20)
    lifted = 0.0
    for Wp in planar:
        phi0 = Wp.sc / ScalarField.from_expr("exp(y)")
        phi3 = -(Wp.vec * ScalarField.from_expr("exp(y)"))
        w = lift_planar(BicomplexField.from_components(phi0, -phi3))
        scale = _q_abs(w(*lp))
        lifted = max(lifted, _rel(_q_abs(second_kind_residual_3d(w, f3, lp)), scale))
    return [Check("quartet_combinations", q, t.second_kind_3d),
            Check("lifted_powers", lifted, t.second_kind_3d)]


def suite_roundtrip3d(ctx):
    f, nu, g, box = _setup3d(ctx)
    rng = ctx.rng("roundtrip3d")
    t = ctx.tol
    pts = _box_points(rng, box, 20)
    F = schr_to_dirac(g, f, nu, pts, t.residual)
    plus = _rel(_q_abs(dirac_plus_residual(F, f, pts)), _q_abs(F(*pts)))
    back = dirac_to_schr(F, f, (0.0, 0.0, 0.0), 0.0, t.compatibility)
    gb, g0, fv = back(*pts), g(*pts), f(*pts)
    d = gb - g0
    const = np.vdot(fv, d) / np.vdot(fv, fv)
    dev = float(np.max(np.abs(d - const * fv)))
    return [Check("dirac_plus_residual", plus, t.chain_3d),
            Check("round_trip_up_to_const_f", dev, t.round_trip)]


SUITES = {
    "exprlang": suite_exprlang,
    "bicomplex": suite_bicomplex,
    "fields": suite_fields,
    "pseudoanalytic": suite_pseudoanalytic,
    "transforms": suite_transforms,
    "solver": suite_solver,
    "dirac": suite_dirac,
    "factorization3d": suite_factorization3d,
    "chain3d": suite_chain3d,
    "second_kind3d": suite_second_kind3d,
    "roundtrip3d": suite_roundtrip3d,
}


def run_suites(doc, names, seed=0, tol=None, timings=False):
    """Run the named suites; returns a JSON-ready report with an overall verdict."""
    ctx = SuiteContext(doc, tol or cfg.Tolerances(), seed)
    results = []
    for name in names:
        start = time.perf_counter()
        try:
            checks = SUITES[name](ctx)
            error = None
        except VekuaError as exc:
            checks, error = [], f"{type(exc).__name__}: {exc}"
        entry = {"suite": name, "passed": error is None and all(c.passed for c in checks),
                 "error": error, "checks": [c.as_dict() for c in checks],
                 "notes": ctx.notes.get(name, [])}
        if timings:
            entry["seconds"] = time.perf_counter() - start
        results.append(entry)
    return {"seed": seed, "passed": all(r["passed"] for r in results), "suites": results}

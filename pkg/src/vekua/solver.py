"""Complete systems of exact solutions and Dirichlet problems by boundary collocation.

The basis functions are ``p^(-1/2) Sc Z^(n)(1, z0; .)`` and
``p^(-1/2) Sc Z^(n)(k, z0; .)`` for ``n = 0, 1, ...``, every one an exact
solution of ``(div p grad + q) u = 0``.  Boundary values are fitted by column
equilibrated least squares with real coefficients.
"""

from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import quadrature
from .errors import DomainError, RankDeficient
from .exprlang import evaluate, parse
from .fields import ScalarField, as_coords
from .jets import Jet
from .pseudoanalytic import (CONDITION_S_TOL, SEQUENCE_TOL, ConditionSData, PowerTable,
                             build_sequence_condition_s)
from .transforms import SOLUTION_TOL, EllipticCoefficients

log = logging.getLogger(__name__)

RANK_THRESHOLD = 1e14
ZERO_COLUMN_TOL = 1e-13
GRID_RADII = 40
GRID_ANGLES = 64


@dataclass(frozen=True)
class Domain:
    """Star-shaped domain given by a boundary curve over ``theta`` in [0, 2 pi)."""

    kind: str
    center: tuple = (0.0, 0.0)
    radius: float = 1.0
    a: float = 1.0
    b: float = 1.0
    r: Optional[str] = None
    params: dict = field(default_factory=dict)

    @classmethod
    def disk(cls, radius=1.0, center=(0.0, 0.0)):
        return cls("disk", tuple(center), radius=radius)

    @classmethod
    def ellipse(cls, a, b, center=(0.0, 0.0)):
        return cls("ellipse", tuple(center), a=a, b=b)

    @classmethod
    def radial(cls, r, center=(0.0, 0.0), params=None):
        return cls("radial", tuple(center), r=r, params=dict(params or {}))

    def boundary(self, theta):
        theta = np.asarray(theta, dtype=float)
        cx, cy = self.center
        if self.kind == "disk":
            return cx + self.radius * np.cos(theta), cy + self.radius * np.sin(theta)
        if self.kind == "ellipse":
            return cx + self.a * np.cos(theta), cy + self.b * np.sin(theta)
        if self.kind == "radial":
            tree = parse(self.r, self.params, ("theta",))
            rv = evaluate(tree, {"theta": Jet.constant(theta, 1, 0)}, self.params).value
            if np.any(np.abs(rv.imag) > 1e-12) or np.any(rv.real <= 0):
                raise DomainError("r(theta) must be real and positive")
            return cx + rv.real * np.cos(theta), cy + rv.real * np.sin(theta)
        raise DomainError(f"unknown domain type {self.kind!r}")

    def collocation_points(self, M):
        theta = 2 * np.pi * np.arange(M) / M
        return self.boundary(theta)

    def interior_grid(self, radii=GRID_RADII, angles=GRID_ANGLES):
        """Polar grid: ``radii`` scaled rings (the outermost on the boundary) by ``angles``."""
        theta = 2 * np.pi * np.arange(angles) / angles
        bx, by = self.boundary(theta)
        s = np.arange(1, radii + 1)[:, None] / radii
        cx, cy = self.center
        return (cx + s * (bx - cx)[None, :]).ravel(), (cy + s * (by - cy)[None, :]).ravel()

    def check_star_shaped(self, z0, samples=720):
        """``z0`` strictly inside and every ray from ``z0`` meets the boundary once."""
        theta = 2 * np.pi * np.arange(samples + 1) / samples
        bx, by = self.boundary(theta)
        ang = np.unwrap(np.arctan2(by - z0[1], bx - z0[0]))
        dist = np.hypot(bx - z0[0], by - z0[1])
        if np.min(dist) <= 1e-12:
            raise DomainError("center lies on the boundary")
        steps = np.diff(ang)
        if not (np.all(steps > 0) and abs(ang[-1] - ang[0] - 2 * np.pi) < 1e-6):
            raise DomainError("domain is not star-shaped with respect to the center, "
                              "or the center is outside")


@dataclass(frozen=True)
class DirichletProblem:
    coeffs: EllipticCoefficients
    condition_s: ConditionSData
    domain: Domain
    boundary_data: ScalarField
    N: int
    M: Optional[int] = None
    center: Optional[tuple] = None
    grid_radii: int = GRID_RADII
    grid_angles: int = GRID_ANGLES

    @property
    def z0(self):
        return tuple(self.center) if self.center is not None else tuple(self.domain.center)

    @property
    def collocation_count(self):
        return self.M if self.M is not None else 4 * self.N


@dataclass(frozen=True)
class BasisFunction:
    n: int
    seed: str  # "1" or "k"


def _candidates(count):
    out = [BasisFunction(0, "1"), BasisFunction(0, "k")]
    n = 1
    while len(out) < count:
        out += [BasisFunction(n, "1"), BasisFunction(n, "k")]
        n += 1
    return out


class CompleteSystem:
    """The first ``N`` nontrivial members of the complete system for ``problem``."""

    def __init__(self, problem, N=None, validate=True, rtol=quadrature.DEFAULT_RTOL,
                 solution_tol=SOLUTION_TOL, condition_s_tol=CONDITION_S_TOL, sequence_tol=SEQUENCE_TOL):
        self.problem = problem
        self.N = int(N if N is not None else problem.N)
        if self.N < 1:
            raise ValueError("N must be at least 1")
        z0 = problem.z0
        problem.domain.check_star_shaped(z0)
        grid = problem.domain.interior_grid(problem.grid_radii, problem.grid_angles)
        self.rtol = rtol
        if validate:
            problem.coeffs.validate(grid, solution_tol)
        self.seq = build_sequence_condition_s(problem.condition_s, grid, condition_s_tol, sequence_tol)
        self.z0 = z0
        self.members = self._select(grid)

    def _select(self, grid):
        # probe a moderate subset of the grid for identically vanishing members
        probe = tuple(g[:: max(1, g.size // 256)] for g in grid)
        count = self.N + 2
        while True:
            cands = _candidates(count)
            n_max = cands[-1].n
            vals = self._raw(probe, n_max, cands)
            size = np.max(np.abs(vals), axis=0)
            keep = size > ZERO_COLUMN_TOL * max(1.0, float(np.max(size)))
            for c, k in zip(cands, keep):
                if not k:
                    log.info("dropping basis member n=%d seed=%s: identically zero", c.n, c.seed)
            chosen = [c for c, k in zip(cands, keep) if k]
            if len(chosen) >= self.N:
                return chosen[: self.N]
            count += 2

    def _raw(self, points, n_max, members):
        x, y = (np.asarray(a, dtype=float).ravel() for a in points)
        table = PowerTable(self.seq, self.z0, n_max, x, y, rtol=self.rtol)
        sp = self.problem.coeffs.p.sqrt()(x, y)
        cols = [table.values[m.n][0 if m.seed == "1" else 1].sc / sp for m in members]
        return np.stack(cols, axis=1)

    @property
    def n_max(self):
        return max(m.n for m in self.members)

    def matrix(self, x, y):
        """Values of all members at the points, shape ``(points, N)``."""
        return self._raw((x, y), self.n_max, self.members)

    def basis_fields(self):
        """Each member as a :class:`ScalarField` carrying exact jets."""
        out = []
        sp = self.problem.coeffs.p.sqrt()
        for m in self.members:
            def func(c, o, m=m):
                x, y = c
                table = PowerTable(self.seq, self.z0, m.n, x, y, rtol=self.rtol)
                jet = table.jets(o)[m.n].sc[0 if m.seed == "1" else 1]
                jet = Jet(jet.coef.reshape(jet.coef.shape[:1] + x.shape), 2, o)
                return jet / sp._func(c, o)
            out.append(ScalarField(func, 2, label=f"u[n={m.n},{m.seed}]"))
        return out


def build_basis(problem, N=None):
    return CompleteSystem(problem, N).basis_fields()


@dataclass
class SolutionExpansion:
    coefficients: np.ndarray
    members: list
    system: CompleteSystem
    condition_number: float
    residual_max: float
    residual_rms: float
    warnings: list = field(default_factory=list)

    def __call__(self, x, y):
        x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
        if not np.any(self.coefficients):
            return np.zeros(x.shape, dtype=self.coefficients.dtype)
        A = self.system.matrix(x.ravel(), y.ravel())
        v = A @ self.coefficients
        if np.isrealobj(self.coefficients) and np.all(np.abs(v.imag) <= 1e-12 * np.maximum(1, np.abs(v))):
            v = v.real
        return v.reshape(x.shape)


def _real_lstsq(A, h):
    """Real ``x`` minimizing ``|A x - h|`` for complex ``A`` and real ``h``."""
    S = np.vstack([A.real, A.imag])
    rhs = np.concatenate([h, np.zeros_like(h)])
    norms = np.linalg.norm(S, axis=0)
    norms[norms == 0] = 1.0
    x, _, _, sv = np.linalg.lstsq(S / norms, rhs, rcond=None)
    cond = float(sv[0] / sv[-1]) if sv[-1] > 0 else math.inf
    return x / norms, cond


def solve_collocation(problem, system=None, rank_threshold=RANK_THRESHOLD):
    """Least-squares fit of the boundary data by the first ``N`` members."""
    system = system or CompleteSystem(problem)
    M = problem.collocation_count
    if M < system.N:
        raise ValueError(f"need at least N={system.N} collocation points, got M={M}")
    bx, by = problem.domain.collocation_points(M)
    A = system.matrix(bx, by)
    g = ScalarField.coerce(problem.boundary_data)(bx, by)
    parts = [g.real]
    if np.any(g.imag != 0):
        parts.append(g.imag)
    sols, conds = [], []
    for h in parts:
        x, cond = _real_lstsq(A, h)
        sols.append(x)
        conds.append(cond)
    coef = sols[0] if len(sols) == 1 else sols[0] + 1j * sols[1]
    cond = max(conds)
    resid = A @ coef - g
    notes = []
    if cond > rank_threshold:
        msg = f"collocation matrix is numerically rank deficient (condition number {cond:.3e})"
        warnings.warn(msg, RankDeficient, stacklevel=2)
        notes.append(msg)
    return SolutionExpansion(coef, list(system.members), system, cond,
                             float(np.max(np.abs(resid))), float(np.sqrt(np.mean(np.abs(resid) ** 2))),
                             notes)


def evaluate_expansion(expansion, point):
    return expansion(*point)


def error_report(expansion, exact, grid=None):
    """Max and RMS error against ``exact`` over ``grid`` (default: the problem's polar grid)."""
    problem = expansion.system.problem
    if grid is None:
        grid = problem.domain.interior_grid(problem.grid_radii, problem.grid_angles)
    x, y = (np.asarray(a, dtype=float).ravel() for a in grid)
    approx = expansion(x, y)
    ref = ScalarField.coerce(exact)(x, y)
    if np.all(ref.imag == 0):
        ref = ref.real
    err = np.abs(approx - ref)
    return {
        "max_error": float(np.max(err)),
        "rms_error": float(np.sqrt(np.mean(err ** 2))),
        "table": {"x": x, "y": y, "approx": approx, "exact": ref, "error": err},
    }

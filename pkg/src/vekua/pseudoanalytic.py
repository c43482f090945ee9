"""Generating pairs and sequences, the (F,G)-calculus and formal powers.

A generating pair ``(F, G)`` spans the solutions of a Vekua equation as
``W = phi F + psi G`` with scalar ``phi``, ``psi``.  Everything here is
expressed through two identities valid for any pair::

    F conj(G) - conj(F) G = -2 k v,    v = Vec(conj(F) G)
    F* = -k conj(F) / v,                G* = k conj(G) / v

so the only degeneracy is ``v = 0``.

Formal powers are evaluated on a fixed straight ray from the center to each
target.  All orders are built bottom-up on one shared set of Gauss-Legendre
nodes with running (cumulative) integrals, and derivatives at a target are
recovered exactly from the integrands, without differencing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Mapping, Optional

import numpy as np

from . import quadrature
from .bicomplex import Bicomplex
from .errors import ConditionSViolation, DegeneratePair, NotPseudoanalytic, PhiDegenerate
from .exprlang import evaluate, parse
from .fields import (BicomplexField, ScalarField, as_coords, dz_jet, dzbar_jet,
                     segment_integrals, Segment)
from .jets import Jet

DEGENERACY_TOL = 1e-12
SEQUENCE_TOL = 1e-8
CONDITION_S_TOL = 1e-8
RESIDUAL_TOL = 1e-6
PHI_FLOOR = 1e-10
PHI_BOUND = 1e10


def _sizes(q):
    return Bicomplex.coerce(q).values().magnitude()


def _vec_conj_product(F, G):
    """``Vec(conj(F) G)``; works on values and on jets."""
    return F.sc * G.vec - F.vec * G.sc


def _check_nondegenerate(F, G, v, tol=DEGENERACY_TOL, where=""):
    vv = np.abs(v.value if isinstance(v, Jet) else np.asarray(v))
    bad = vv <= tol * _sizes(F) * _sizes(G)
    if np.any(bad):
        raise DegeneratePair(f"Vec(conj(F) G) vanishes{where}; (F, G) is not a generating pair")


def _recip(v):
    return v.reciprocal() if isinstance(v, Jet) else 1.0 / v


# ---------- generating pairs ----------

@dataclass(frozen=True)
class GeneratingPair:
    F: BicomplexField
    G: BicomplexField

    @classmethod
    def main(cls, f):
        """The pair ``(f, k/f)`` of the main Vekua equation."""
        f = ScalarField.coerce(f)
        return cls(BicomplexField.from_components(f), BicomplexField.from_components(0, f.reciprocal()))

    def jets(self, coords, order):
        return self.F._func(coords, order), self.G._func(coords, order)


@dataclass(frozen=True)
class CharacteristicCoefficients:
    a: Bicomplex
    b: Bicomplex
    A: Bicomplex
    B: Bicomplex


def _coefficients_from_jets(F, G, tol=DEGENERACY_TOL):
    """Characteristic coefficients as jets one order below ``F``, ``G``."""
    v = _vec_conj_product(F, G)
    _check_nondegenerate(F, G, v, tol)
    inv_den = Bicomplex(0 * v, 0.5 * _recip(v))  # 1 / (F conj(G) - conj(F) G) = k / (2 v)
    Fc, Gc = F.conj(), G.conj()
    Fzb, Gzb, Fz, Gz = dzbar_jet(F), dzbar_jet(G), dz_jet(F), dz_jet(G)
    a = -(Fc * Gzb - Fzb * Gc) * inv_den
    b = (F * Gzb - Fzb * G) * inv_den
    A = -(Fc * Gz - Fz * Gc) * inv_den
    B = (F * Gz - Fz * G) * inv_den
    return CharacteristicCoefficients(a, b, A, B)


def characteristic_coefficients(pair, point, tol=DEGENERACY_TOL):
    coords = as_coords(point, 2)
    F, G = pair.jets(coords, 1)
    c = _coefficients_from_jets(F, G, tol)
    return CharacteristicCoefficients(c.a.values(), c.b.values(), c.A.values(), c.B.values())


def _adjoint_from(F, G, tol=DEGENERACY_TOL):
    v = _vec_conj_product(F, G)
    _check_nondegenerate(F, G, v, tol)
    r = _recip(v)
    Fs = Bicomplex(-F.vec * r, -F.sc * r)   # -k conj(F) / v
    Gs = Bicomplex(G.vec * r, G.sc * r)     # k conj(G) / v
    return Fs, Gs


def adjoint_pair(pair, tol=DEGENERACY_TOL):
    """``(F*, G*)`` with ``F* = -2 conj(F)/den`` and ``G* = 2 conj(G)/den``."""
    def Fs(c, o):
        return _adjoint_from(*pair.jets(c, o), tol)[0]

    def Gs(c, o):
        return _adjoint_from(*pair.jets(c, o), tol)[1]

    return GeneratingPair(BicomplexField(Fs), BicomplexField(Gs))


def _fg_derivative_jet(W, F, G, tol=DEGENERACY_TOL):
    c = _coefficients_from_jets(F, G, tol)
    return dz_jet(W) - c.A * W - c.B * W.conj()


def fg_derivative(W, pair, point, tol=DEGENERACY_TOL):
    """``W_z - A W - B conj(W)`` at ``point``."""
    coords = as_coords(point, 2)
    W = BicomplexField.coerce(W)
    F, G = pair.jets(coords, 1)
    return _fg_derivative_jet(W._func(coords, 1), F, G, tol).values()


def fg_integral(W, pair, seg, tol=DEGENERACY_TOL):
    """``F(z1) Sc int G* W dz + G(z1) Sc int F* W dz`` along ``seg``."""
    W = BicomplexField.coerce(W)
    adj = adjoint_pair(pair, tol)
    ig = segment_integrals(adj.G * W, [seg.start], [seg.end], seg.rtol, seg.nodes)
    iF = segment_integrals(adj.F * W, [seg.start], [seg.end], seg.rtol, seg.nodes)
    F1 = pair.F(*seg.end)
    G1 = pair.G(*seg.end)
    out = F1 * complex(ig.sc[0]) + G1 * complex(iF.sc[0])
    return Bicomplex(complex(out.sc), complex(out.vec))


# ---------- residuals of the main Vekua equation ----------

def _main_coefficient(fj):
    """``f_zbar / f`` as a bicomplex jet."""
    inv = fj.truncate(fj.order - 1).reciprocal()
    return Bicomplex(0.5 * fj.d(0) * inv, 0.5 * fj.d(1) * inv)


def vekua_residual(W, f, point):
    """``W_zbar - (f_zbar / f) conj(W)``."""
    coords = as_coords(point, 2)
    W = BicomplexField.coerce(W)._func(coords, 1)
    fj = ScalarField.coerce(f)._func(coords, 1)
    return (dzbar_jet(W) - _main_coefficient(fj) * W.conj()).values()


def second_kind_residual(W, f, point, tol=1e-12):
    """Residual of ``w_zbar = ((1 - f^2)/(1 + f^2)) conj(w)_zbar``.

    ``w = phi + psi k`` where ``W = phi f + psi k / f``.
    """
    from .errors import CoefficientError

    coords = as_coords(point, 2)
    Wj = BicomplexField.coerce(W)._func(coords, 1)
    fj = ScalarField.coerce(f)._func(coords, 1)
    f2 = fj.value ** 2
    if np.any(np.abs(1 + f2) <= tol * (1 + np.abs(f2))):
        raise CoefficientError("1 + f^2 vanishes; the second-kind form is undefined here")
    w = Bicomplex(Wj.sc / fj, Wj.vec * fj)
    ratio = (1 - f2) / (1 + f2)
    return (dzbar_jet(w) - dzbar_jet(w.conj()) * ratio).values()


# ---------- Condition S ----------

CONDITION_S_PRESETS = {
    "cartesian_x": ("x", "0", "0"),
    "cartesian_y": ("y", "0", "0"),
    "polar_angle": ("atan2(y, x)", "0", "0"),
    "radial": ("sqrt(x^2 + y^2)", "1/rho", "log(rho)"),
    "parabolic": ("sqrt(x^2 + y^2) + x", "1/(2*rho)", "log(rho)/2"),
}


@dataclass(frozen=True)
class ConditionSData:
    """A variable ``rho`` with ``lap(rho) = s(rho) |grad rho|^2``.

    ``s`` and ``S`` (an antiderivative of ``s``) are expressions in ``rho``;
    ``f`` is either ``f_of_rho`` (an expression in ``rho``) or a direct
    ``f`` in ``x``, ``y`` (an expression or a :class:`ScalarField`).
    """

    rho: str
    s: str
    S: str
    f_of_rho: Optional[str] = "1"
    f: Optional[Any] = None
    params: Mapping[str, complex] = field(default_factory=dict)

    def _univariate(self, text):
        return parse(text, self.params, ("rho",))

    def rho_field(self):
        return ScalarField.from_expr(self.rho, self.params)

    def _of_rho(self, text):
        tree = self._univariate(text)
        rho = self.rho_field()
        params = dict(self.params)
        return ScalarField(lambda c, o: evaluate(tree, {"rho": rho._func(c, o)}, params))

    def f_field(self):
        if isinstance(self.f, ScalarField):
            return self.f
        if self.f is not None:
            return ScalarField.from_expr(self.f, self.params)
        return self._of_rho(self.f_of_rho)

    def phi_field(self):
        """``phi = k exp(-S(rho)) rho_z = exp(-S) (rho_y + k rho_x) / 2``."""
        S_tree = self._univariate(self.S)
        rho = self.rho_field()
        params = dict(self.params)

        def func(c, o):
            r = rho._func(c, o + 1)
            e = evaluate(S_tree, {"rho": r.truncate(o)}, params)
            e = (-e).exp()
            return Bicomplex(0.5 * e * r.d(1), 0.5 * e * r.d(0))

        return BicomplexField(func)

    def residuals(self, xs, ys):
        """Pointwise ``lap(rho) - s(rho)|grad rho|^2`` and ``S'(rho) - s(rho)`` with scales."""
        coords = as_coords((xs, ys), 2)
        r = self.rho_field()._func(coords, 2)
        params = dict(self.params)
        s_tree, S_tree = self._univariate(self.s), self._univariate(self.S)
        s_val = evaluate(s_tree, {"rho": Jet.constant(r.value, 1, 0)}, params).value
        grad2 = r.dx ** 2 + r.dy ** 2
        lap = r.dxx + r.dyy
        cond = lap - s_val * grad2
        cond_scale = np.maximum(1.0, np.maximum(np.abs(lap), np.abs(s_val * grad2)))
        dS = evaluate(S_tree, {"rho": Jet.variable(r.value, 0, 1, 1)}, params).partial(0)
        anti = dS - s_val
        anti_scale = np.maximum(1.0, np.abs(s_val))
        return r.value, (cond, cond_scale), (anti, anti_scale)


def condition_s_preset(name, f_of_rho="1", params=None, f=None):
    try:
        rho, s, S = CONDITION_S_PRESETS[name]
    except KeyError:
        raise ValueError(f"unknown Condition S preset {name!r}; "
                         f"choose from {sorted(CONDITION_S_PRESETS)}") from None
    return ConditionSData(rho, s, S, f_of_rho, f, dict(params or {}))


@dataclass(frozen=True)
class GeneratingSequence:
    """Pairs ``(F_m, G_m) = (phi^m F, phi^m G)`` for ``m >= 0``."""

    base: GeneratingPair
    phi: BicomplexField
    f: Optional[ScalarField] = None

    def pair(self, m):
        if m == 0:
            return self.base
        return GeneratingPair(self.base.F * self.phi ** m, self.base.G * self.phi ** m)

    def pair_jets(self, coords, m, order):
        F, G = self.base.jets(coords, order)
        if m == 0:
            return F, G
        p = self.phi._func(coords, order) ** m
        return F * p, G * p

    def pair_values(self, coords, count):
        """Values of ``(F_m, G_m)`` for ``m = 0 .. count - 1``."""
        F, G = self.base.jets(coords, 0)
        F, G = F.values(), G.values()
        phi = self.phi._func(coords, 0).values()
        out = [(F, G)]
        for _ in range(1, count):
            F, G = F * phi, G * phi
            out.append((F, G))
        return out


def build_sequence_condition_s(data, grid, tol=CONDITION_S_TOL, sequence_tol=SEQUENCE_TOL,
                               phi_floor=PHI_FLOOR, phi_bound=PHI_BOUND, check_points=20):
    """Validate ``data`` on the sample ``grid = (xs, ys)`` and build the sequence."""
    xs, ys = (np.asarray(a, dtype=float).ravel() for a in grid)
    rho, (cond, cond_scale), (anti, anti_scale) = data.residuals(xs, ys)
    if np.any(np.abs(rho.imag) > 1e-12 * np.maximum(1.0, np.abs(rho.real))):
        raise ConditionSViolation("rho must be real-valued on the domain")
    rel = np.abs(cond) / cond_scale
    if np.max(rel) > tol:
        i = int(np.argmax(rel))
        raise ConditionSViolation(
            f"lap(rho) - s(rho)|grad rho|^2 = {abs(cond[i]):.3e} at ({xs[i]:.6g}, {ys[i]:.6g}); "
            f"s does not match rho"
        )
    rel = np.abs(anti) / anti_scale
    if np.max(rel) > tol:
        i = int(np.argmax(rel))
        raise ConditionSViolation(f"S'(rho) differs from s(rho) by {abs(anti[i]):.3e} at rho={rho[i].real:.6g}")

    phi = data.phi_field()
    pv = phi(xs, ys)
    size = pv.magnitude()
    if np.any(size < phi_floor) or np.any(size > phi_bound) or not np.all(np.isfinite(size)):
        raise PhiDegenerate("phi = k exp(-S(rho)) rho_z vanishes or is unbounded on the domain")
    if np.any(np.abs(pv.norm_sq()) < phi_floor * size ** 2):
        raise PhiDegenerate("phi is a bicomplex zero divisor on the domain")

    f = data.f_field()
    seq = GeneratingSequence(GeneratingPair.main(f), phi, f)
    pick = np.linspace(0, xs.size - 1, min(check_points, xs.size)).astype(int)
    err = sequence_property_errors(seq, (xs[pick], ys[pick]), m_max=1)
    if err > sequence_tol:
        raise ConditionSViolation(
            f"(phi^m F, phi^m G) fails the successor test by {err:.3e}; f must be a function of rho alone"
        )
    return seq


def sequence_property_errors(seq, points, m_max=2):
    """Largest relative successor defect ``|a_{m+1} - a_m|``, ``|b_{m+1} + B_m|``."""
    coords = as_coords(points, 2)
    worst = 0.0
    prev = _coefficients_from_jets(*seq.pair_jets(coords, 0, 1))
    for m in range(m_max + 1):
        nxt = _coefficients_from_jets(*seq.pair_jets(coords, m + 1, 1))
        scale = 1.0 + _sizes(prev.A) + _sizes(prev.B) + _sizes(prev.a) + _sizes(prev.b)
        da = _sizes(nxt.a - prev.a) / scale
        db = _sizes(nxt.b + prev.B) / scale
        worst = max(worst, float(np.max(da)), float(np.max(db)))
        prev = nxt
    return worst


# ---------- formal powers ----------

SEEDS = ("1", "k")


class PowerTable:
    """All formal powers ``Z_m^(n)(a, z0; z)``, ``n <= n_max``, seeds ``1`` and ``k``.

    ``table.values[n]`` holds Bicomplex arrays shaped ``(2, T)`` (seed, target)
    for the sequence index ``m0``.  ``jets(order)`` returns the same as jets.
    """

    def __init__(self, seq, z0, n_max, xs, ys, m0=0, rtol=quadrature.DEFAULT_RTOL,
                 nodes=quadrature.DEFAULT_NODES, max_panels=quadrature.MAX_PANELS):
        self.seq = seq
        self.z0 = (float(z0[0]), float(z0[1]))
        self.n_max = int(n_max)
        if self.n_max < 0:
            raise ValueError("n_max must be nonnegative")
        self.m0 = int(m0)
        self.xs, self.ys = (np.atleast_1d(np.asarray(a, dtype=float)).ravel()
                            for a in np.broadcast_arrays(xs, ys))
        self.nodes = nodes
        self._lam, self._mu = self._center_constants()
        self._integrals = self._integrate(rtol, max_panels)
        self.values = self._assemble_values()

    def _center_constants(self):
        coords = as_coords(([self.z0[0]], [self.z0[1]]), 2)
        pairs = self.seq.pair_values(coords, self.m0 + self.n_max + 1)[self.m0:]
        lam = np.empty((self.n_max + 1, 2), dtype=complex)
        mu = np.empty_like(lam)
        for j, (F, G) in enumerate(pairs):
            det = _vec_conj_product(F, G)[0]
            if abs(det) < DEGENERACY_TOL * _sizes(F)[0] * _sizes(G)[0]:
                raise DegeneratePair("lambda, mu system is singular at the center")
            F1, F2, G1, G2 = F.sc[0], F.vec[0], G.sc[0], G.vec[0]
            lam[j] = (G2 / det, -G1 / det)
            mu[j] = (-F2 / det, F1 / det)
        return lam, mu

    def _integrate(self, rtol, max_panels):
        n_max, m0 = self.n_max, self.m0
        x0, y0 = self.z0
        dxT, dyT = self.xs - x0, self.ys - y0
        lam, mu = self._lam, self._mu
        levels = [(j, d) for d in range(1, n_max + 1) for j in range(n_max - d + 1)]

        def compute(idx, panels):
            t, _ = quadrature.panel_nodes(panels, self.nodes)
            nn = t.size
            tt = np.append(t, 1.0)
            dx, dy = dxT[idx, None], dyT[idx, None]
            coords = (x0 + tt[None, :] * dx, y0 + tt[None, :] * dy)
            pairs = self.seq.pair_values(coords, m0 + n_max + 1)[m0:]
            delta = Bicomplex(dx, dy)
            adj = [_adjoint_from(F, G) for F, G in pairs[:n_max]]
            Gd = [(Gs * delta)[..., :nn] for _, Gs in adj]
            Fd = [(Fs * delta)[..., :nn] for Fs, _ in adj]
            # level 0 on all nodes; seed axis first
            prev = [Bicomplex(lam[j, :, None, None] * F.sc + mu[j, :, None, None] * G.sc,
                              lam[j, :, None, None] * F.vec + mu[j, :, None, None] * G.vec)
                    for j, (F, G) in enumerate(pairs)]
            out = np.empty((len(levels), 2, 2, idx.size), dtype=complex)
            k = 0
            for d in range(1, n_max + 1):
                cur = []
                for j in range(n_max - d + 1):
                    sub = prev[j + 1][..., :nn]
                    run_phi, tot_phi = quadrature.cumulative((Gd[j] * sub).sc, panels, self.nodes)
                    run_psi, tot_psi = quadrature.cumulative((Fd[j] * sub).sc, panels, self.nodes)
                    out[k, 0], out[k, 1] = tot_phi, tot_psi
                    k += 1
                    if d < n_max:
                        phi = np.concatenate([run_phi, tot_phi[..., None]], axis=-1)
                        psi = np.concatenate([run_psi, tot_psi[..., None]], axis=-1)
                        F, G = pairs[j]
                        cur.append((F * phi + G * psi) * d)
                prev = cur
            scale = np.max(np.abs(out), axis=(1, 2), keepdims=True)
            return out, scale

        if not levels:
            return {}
        res = quadrature.adaptive(compute, self.xs.size, rtol=rtol, max_panels=max_panels,
                                  what="formal power")
        return {lv: (res[i, 0], res[i, 1]) for i, lv in enumerate(levels)}

    def _assemble_values(self):
        coords = as_coords((self.xs, self.ys), 2)
        pairs = self.seq.pair_values(coords, self.m0 + self.n_max + 1)[self.m0:]
        out = []
        for n in range(self.n_max + 1):
            F, G = pairs[0]
            if n == 0:
                lam, mu = self._lam[0, :, None], self._mu[0, :, None]
                out.append(Bicomplex(lam * F.sc + mu * G.sc, lam * F.vec + mu * G.vec))
            else:
                phi, psi = self._integrals[(0, n)]
                out.append((F * phi + G * psi) * n)
        return out

    def value(self, n, a=1.0):
        """``Z^(n)(a, z0; z)`` at the targets for a bicomplex ``a``."""
        a = Bicomplex.coerce(a)
        v = self.values[n]
        return v[0] * a.sc + v[1] * a.vec

    def jets(self, order):
        """Jets (order ``order``) of ``Z^(n)`` at the targets, ``n = 0..n_max``.

        Uses ``Z = n (F Phi + G Psi)`` with ``grad Phi = (Sc G* Z', Sc k G* Z')``
        where ``Z'`` is the power one level down.
        """
        coords = as_coords((self.xs, self.ys), 2)
        n_max, m0 = self.n_max, self.m0
        pj = [self.seq.pair_jets(coords, m0 + j, order) for j in range(n_max + 1)]
        adj = [_adjoint_from(F, G) for F, G in pj[:n_max]]

        def lift(q):
            return Bicomplex(q.sc * np.ones((2, 1)), q.vec * np.ones((2, 1)))

        prev = []
        for j, (F, G) in enumerate(pj):
            lam, mu = self._lam[j, :, None], self._mu[j, :, None]
            prev.append(lift(F) * lam + lift(G) * mu)
        result = [prev[0]]
        for d in range(1, n_max + 1):
            cur = []
            for j in range(n_max - d + 1):
                sub = prev[j + 1]
                Fs, Gs = adj[j]
                phi_val, psi_val = self._integrals[(j, d)]
                Phi = _from_integrand(phi_val, Gs * sub, order)
                Psi = _from_integrand(psi_val, Fs * sub, order)
                F, G = pj[j]
                cur.append((lift(F) * Phi + lift(G) * Psi) * d)
            prev = cur
            result.append(cur[0])
        return result


def _from_integrand(value, g, order):
    """Jet of ``Phi(z) = Sc int^z g dz`` from its value and the jet of ``g``."""
    if order == 0:
        return Jet.constant(value, 2, 0)
    g = Bicomplex(g.sc.truncate(order - 1), g.vec.truncate(order - 1))
    # d/dx: Sc(g), d/dy: Sc(g k) = -Vec(g)
    return Jet.from_gradient(value, [g.sc, -g.vec])


@dataclass(frozen=True)
class FormalPower:
    """``Z_m^(n)(a, z0; .)`` as a lazily evaluated field."""

    seq: GeneratingSequence
    n: int
    a: Bicomplex = Bicomplex(1 + 0j, 0j)
    z0: tuple = (0.0, 0.0)
    m: int = 0

    def table(self, x, y):
        return PowerTable(self.seq, self.z0, self.n, x, y, m0=self.m)

    def __call__(self, x, y):
        x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
        v = self.table(x, y).value(self.n, self.a)
        return Bicomplex(v.sc.reshape(x.shape), v.vec.reshape(x.shape))

    @property
    def field(self):
        a = Bicomplex.coerce(self.a)

        def func(coords, order):
            x, y = coords
            jets = self.table(x, y).jets(order)[self.n]
            sc = jets.sc[0] * a.sc + jets.sc[1] * a.vec
            vec = jets.vec[0] * a.sc + jets.vec[1] * a.vec
            shape = x.shape
            return Bicomplex(Jet(sc.coef.reshape(sc.coef.shape[:1] + shape), 2, order),
                             Jet(vec.coef.reshape(vec.coef.shape[:1] + shape), 2, order))

        return BicomplexField(func, label=f"Z^({self.n})")


def formal_power(seq, m, n, a, z0, z):
    """``Z_m^(n)(a, z0; z)`` at the point(s) ``z = (x, y)``."""
    return FormalPower(seq, n, Bicomplex.coerce(a), tuple(z0), m)(*z)


def taylor_coefficients(W, seq, z0, N, residual_tol=RESIDUAL_TOL):
    """``a_n = W^[n](z0) / n!`` for ``n = 0..N``, with ``W^[m+1] = d_(F_m,G_m) W^[m]``."""
    W = BicomplexField.coerce(W)
    coords = as_coords(([z0[0]], [z0[1]]), 2)
    Wj = W._func(coords, N + 1)
    if seq.f is not None:
        fj = seq.f._func(coords, 1)
        res = (dzbar_jet(Wj) - _main_coefficient(fj) * Wj.conj()).values()
        scale = 1.0 + _sizes(Wj.values()) + _sizes(dz_jet(Wj).values())
        if np.max(_sizes(res) / scale) > residual_tol:
            raise NotPseudoanalytic("W does not satisfy the Vekua equation of the sequence at z0")
    cur = Bicomplex(Wj.sc.truncate(N), Wj.vec.truncate(N))
    coeffs = []
    for n in range(N + 1):
        val = cur.values()
        coeffs.append(Bicomplex(complex(val.sc[0]) / math.factorial(n),
                                complex(val.vec[0]) / math.factorial(n)))
        if n < N:
            F, G = seq.pair_jets(coords, n, N - n)
            cur = _fg_derivative_jet(cur, F, G)
    return coeffs


__all__ = [
    "GeneratingPair", "CharacteristicCoefficients", "characteristic_coefficients", "adjoint_pair",
    "fg_derivative", "fg_integral", "vekua_residual", "second_kind_residual",
    "ConditionSData", "CONDITION_S_PRESETS", "condition_s_preset", "GeneratingSequence",
    "build_sequence_condition_s", "sequence_property_errors", "PowerTable", "FormalPower",
    "formal_power", "taylor_coefficients", "Segment",
]

"""Factorization of ``div p grad + q`` and the transforms between its solutions.

With a nonvanishing particular solution ``u0`` of ``(div p grad + q) u = 0``
and ``f = sqrt(p) u0``::

    (div p grad + q) phi / 4 = sqrt(p) (d_z + b C)(d_zbar - b C) (sqrt(p) phi),   b = f_zbar / f

and ``W = sqrt(p) u + k v / sqrt(p)`` solves ``W_zbar = b conj(W)`` exactly when
``u`` and its conjugate ``v`` are related by the ``Abar`` formulas below.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .bicomplex import Bicomplex
from .errors import CoefficientError
from .fields import (BicomplexField, ScalarField, antiderivative_field, as_coords,
                     dz_jet, dzbar_field, dzbar_jet)

SOLUTION_TOL = 1e-6
VANISHING_TOL = 1e-12


def _div_weighted_grad(w, u):
    """``div(w grad u)`` for jets ``w`` (order >= 1) and ``u`` (order >= 2)."""
    out = w.truncate(u.order - 1) * u.laplacian()
    for axis in range(u.nvars):
        out = out + w.d(axis) * u.d(axis).truncate(w.order - 1)
    return out


@dataclass(frozen=True)
class EllipticCoefficients:
    """Coefficients ``p``, ``q`` and a particular solution ``u0``.

    ``sqrt(p)`` is the principal branch.  Non-real ``p`` is only accepted with
    ``branch_confirmed=True``, after which the branch is still required not to
    jump on the validation grid.
    """

    p: ScalarField
    q: ScalarField
    u0: ScalarField
    branch_confirmed: bool = False

    @classmethod
    def from_exprs(cls, p, q, u0, params: Mapping[str, complex] = None, ndim=2,
                   branch_confirmed=False):
        params = dict(params or {})
        return cls(ScalarField.from_expr(p, params, ndim), ScalarField.from_expr(q, params, ndim),
                   ScalarField.from_expr(u0, params, ndim), branch_confirmed)

    @property
    def ndim(self):
        return self.p.ndim

    @property
    def sqrt_p(self):
        return self.p.sqrt()

    @property
    def f(self):
        return self.p.sqrt() * self.u0

    def operator(self, phi):
        """The field ``(div p grad + q) phi``."""
        phi = ScalarField.coerce(phi, self.ndim)
        p, q = self.p, self.q

        def func(c, o):
            u = phi._func(c, o + 2)
            return _div_weighted_grad(p._func(c, o + 1), u) + q._func(c, o) * u.truncate(o)

        return ScalarField(func, self.ndim)

    def validate(self, grid, tol=SOLUTION_TOL):
        """Check ``p``, ``u0`` nonvanishing, the branch of ``sqrt(p)`` and the ``u0`` residual."""
        coords = as_coords(grid, self.ndim)
        pj = self.p._func(coords, 2)
        uj = self.u0._func(coords, 2)
        pv, uv = pj.value, uj.value
        if np.any(np.abs(pv) <= VANISHING_TOL) or np.any(np.abs(uv) <= VANISHING_TOL):
            raise CoefficientError("p and u0 must not vanish on the domain")
        nonreal = np.abs(pv.imag) > VANISHING_TOL * np.abs(pv)
        negative = (pv.real < 0) & ~nonreal
        if (np.any(nonreal) or np.any(negative)) and not self.branch_confirmed:
            raise CoefficientError("p is not positive; confirm the principal branch of sqrt(p) explicitly")
        if np.any(np.abs(np.angle(pv)) > np.pi - 1e-6):
            raise CoefficientError("p meets the branch cut of the principal sqrt(p)")
        op = self.operator(self.u0)._func(coords, 0).value
        scale = np.abs(pv) * np.abs(uj.laplacian().value) + np.abs(self.q._func(coords, 0).value * uv)
        for axis in range(self.ndim):
            scale = scale + np.abs(pj.d(axis).value * uj.d(axis).value)
        rel = np.abs(op) / np.maximum(scale, 1.0)
        if np.max(rel) > tol:
            raise CoefficientError(f"u0 is not a solution: residual {np.max(rel):.3e} exceeds {tol:.1e}")
        return self


def manufactured_coefficients(p, u0, params=None, ndim=2):
    """Coefficients with ``q = -div(p grad u0) / u0`` so that ``u0`` is an exact solution."""
    params = dict(params or {})
    p = ScalarField.coerce(ScalarField.from_expr(p, params, ndim) if isinstance(p, str) else p, ndim)
    u0 = ScalarField.coerce(ScalarField.from_expr(u0, params, ndim) if isinstance(u0, str) else u0, ndim)

    def q(c, o):
        u = u0._func(c, o + 2)
        return -_div_weighted_grad(p._func(c, o + 1), u) / u.truncate(o)

    return EllipticCoefficients(p, ScalarField(q, ndim), u0)


def _point_jets(field, point, order, ndim=2):
    return ScalarField.coerce(field, ndim)._func(as_coords(point, ndim), order)


def _main_b(fj):
    inv = fj.truncate(fj.order - 1).reciprocal()
    return Bicomplex(0.5 * fj.d(0) * inv, 0.5 * fj.d(1) * inv)


def schrodinger_reduction(p, q, point):
    """``r = lap(sqrt p)/sqrt p - q/p`` so that ``div p grad + q = sqrt(p)(lap - r)sqrt(p)``."""
    pj = _point_jets(p, point, 2)
    s = pj.sqrt()
    return (s.laplacian() / s.truncate(0) - _point_jets(q, point, 0) / pj.truncate(0)).value


def factorization_residual_2d(phi, coeffs, point):
    """Right side minus left side of the factorization identity at ``point``."""
    coords = as_coords(point, 2)
    ph = ScalarField.coerce(phi)._func(coords, 2)
    sp = coeffs.p.sqrt()._func(coords, 2)
    fj = coeffs.f._func(coords, 2)
    b = _main_b(fj)
    lhs = 0.25 * coeffs.operator(phi)._func(coords, 0)
    psi = Bicomplex(sp * ph, 0 * ph)
    V = dzbar_jet(psi) - b * psi.conj()
    U = dz_jet(V) + b * V.conj()
    rhs = U * sp.truncate(0)
    return (rhs - lhs).values()


def associated_potential_q1(coeffs, point):
    """``q1 = -(q/p + 2 <grad p/p, grad u0/u0> + 2 |grad u0/u0|^2) / p``."""
    pj = _point_jets(coeffs.p, point, 1)
    uj = _point_jets(coeffs.u0, point, 1)
    q = _point_jets(coeffs.q, point, 0).value
    p, u = pj.value, uj.value
    gp = (pj.dx / p, pj.dy / p)
    gu = (uj.dx / u, uj.dy / u)
    return -(q / p + 2 * (gp[0] * gu[0] + gp[1] * gu[1]) + 2 * (gu[0] ** 2 + gu[1] ** 2)) / p


def associated_operator(coeffs, v):
    """The field ``(div p^-1 grad + q1) v``."""
    v = ScalarField.coerce(v)
    p, q, u0 = coeffs.p, coeffs.q, coeffs.u0

    def func(c, o):
        vj = v._func(c, o + 2)
        pj = p._func(c, o + 1)
        uj = u0._func(c, o + 1)
        pt, ut = pj.truncate(o), uj.truncate(o)
        gp = (pj.d(0) / pt, pj.d(1) / pt)
        gu = (uj.d(0) / ut, uj.d(1) / ut)
        q1 = -(q._func(c, o) / pt + 2 * (gp[0] * gu[0] + gp[1] * gu[1])
               + 2 * (gu[0] * gu[0] + gu[1] * gu[1])) / pt
        return _div_weighted_grad(pj.reciprocal(), vj) + q1 * vj.truncate(o)

    return ScalarField(func)


def _abar(integrand, base, c=0.0):
    return antiderivative_field(integrand, base, c, "Abar")


def _k_times(scalar, W):
    """Bicomplex field ``k * scalar * W``."""
    return BicomplexField.coerce(W) * BicomplexField.from_components(0, scalar)


def conjugate_solution(u, coeffs, base, c=0.0):
    """``v = Abar(k p u0^2 d_zbar(u / u0)) / u0``; unique up to ``c / u0``."""
    u = ScalarField.coerce(u)
    u0 = coeffs.u0
    integrand = _k_times(coeffs.p * u0 * u0, dzbar_field(u / u0))
    return _abar(integrand, base, c) / u0


def inverse_conjugate(v, coeffs, base, c=0.0):
    """``u = -u0 Abar(k u0^-2 p^-1 d_zbar(u0 v))``; unique up to ``c u0``."""
    v = ScalarField.coerce(v)
    u0 = coeffs.u0
    integrand = _k_times((coeffs.p * u0 * u0).reciprocal(), dzbar_field(u0 * v))
    return -(u0 * _abar(integrand, base, c))


def schrodinger_conjugate_W2(W1, f, base, c=0.0, inverse=False):
    """``W2 = Abar(k f^2 d_zbar(W1/f)) / f``; with ``inverse=True`` the map ``W2 -> W1``.

    The inverse is ``W1 = -f Abar(k f^-2 d_zbar(f W2))``.
    """
    W = ScalarField.coerce(W1)
    f = ScalarField.coerce(f)
    if inverse:
        return -(f * _abar(_k_times((f * f).reciprocal(), dzbar_field(f * W)), base, c))
    return _abar(_k_times(f * f, dzbar_field(W / f)), base, c) / f


def divform_conjugate(U, f, base, c=0.0, inverse=False):
    """``V = Abar(k f^2 U_zbar)``; with ``inverse=True`` the map ``V -> U = -Abar(k f^-2 V_zbar)``."""
    U = ScalarField.coerce(U)
    f = ScalarField.coerce(f)
    if inverse:
        return -_abar(_k_times((f * f).reciprocal(), dzbar_field(U)), base, c)
    return _abar(_k_times(f * f, dzbar_field(U)), base, c)


def divgrad_conjugation_identity(coeffs, phi, point):
    """``(div p grad + q) phi - u0^-1 div(p u0^2 grad(phi / u0))`` at ``point``."""
    coords = as_coords(point, coeffs.ndim)
    phi = ScalarField.coerce(phi, coeffs.ndim)
    lhs = coeffs.operator(phi)._func(coords, 0)
    u = coeffs.u0._func(coords, 3)
    w = coeffs.p._func(coords, 1) * u.truncate(1) * u.truncate(1)
    inner = phi._func(coords, 2) / u.truncate(2)
    rhs = _div_weighted_grad(w, inner) / u.truncate(0)
    return (lhs - rhs).value


# ---------- residuals of the derived second-order equations ----------

def schrodinger_residual(w, r, point):
    """``-lap(w) + r w``."""
    wj = _point_jets(w, point, 2)
    return (-wj.laplacian() + _point_jets(r, point, 0) * wj.truncate(0)).value


def divergence_residual(u, weight, point):
    """``div(weight grad u)``."""
    return _div_weighted_grad(_point_jets(weight, point, 1), _point_jets(u, point, 2)).value


def potentials_r1_r2(f):
    """Scalar fields ``r1 = lap f / f`` and ``r2 = 2 |grad f|^2 / f^2 - r1``."""
    f = ScalarField.coerce(f)

    def r1(c, o):
        fj = f._func(c, o + 2)
        return fj.laplacian() / fj.truncate(o)

    def r2(c, o):
        fj = f._func(c, o + 2)
        ft = fj.truncate(o)
        g = fj.d(0).truncate(o) ** 2 + fj.d(1).truncate(o) ** 2
        return 2 * g / (ft * ft) - fj.laplacian() / ft

    return ScalarField(r1), ScalarField(r2)

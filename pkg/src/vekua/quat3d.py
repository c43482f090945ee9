"""Complex quaternions and the three-dimensional factorization.

``Q = Q0 + Q1 i + Q2 j + Q3 k`` with complex components; the imaginary unit of
the components commutes with ``i``, ``j``, ``k``.  The operator

    D = i d_x + j d_y + k d_z,     D Q = -div Q + grad Q0 + rot Q,

satisfies ``D^2 = -lap``.  ``M^P`` is right multiplication by ``P``.
The third coordinate is named ``z3`` in expressions.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

import numpy as np

from .errors import CoefficientError, CompatibilityError
from .fields import DEFAULT_COMPAT_TOL, ScalarField, as_coords
from .jets import Jet
from . import quadrature
from .transforms import EllipticCoefficients

SOLUTION_TOL = 1e-8


def _values(c):
    return c.value if isinstance(c, Jet) else np.asarray(c)


@dataclass(frozen=True)
class ComplexQuaternion:
    q0: Any = 0j
    q1: Any = 0j
    q2: Any = 0j
    q3: Any = 0j

    __array_ufunc__ = None

    @classmethod
    def coerce(cls, other):
        if isinstance(other, ComplexQuaternion):
            return other
        z = 0 * other if isinstance(other, Jet) else 0j
        return cls(other, z, z, z)

    @classmethod
    def vector(cls, v1, v2, v3):
        return cls(0 * v1, v1, v2, v3)

    @property
    def components(self):
        return (self.q0, self.q1, self.q2, self.q3)

    @property
    def scalar(self):
        return self.q0

    @property
    def vec(self):
        return (self.q1, self.q2, self.q3)

    def __add__(self, other):
        o = ComplexQuaternion.coerce(other)
        return ComplexQuaternion(*(a + b for a, b in zip(self.components, o.components)))

    __radd__ = __add__

    def __sub__(self, other):
        o = ComplexQuaternion.coerce(other)
        return ComplexQuaternion(*(a - b for a, b in zip(self.components, o.components)))

    def __rsub__(self, other):
        return ComplexQuaternion.coerce(other) - self

    def __neg__(self):
        return ComplexQuaternion(*(-a for a in self.components))

    def __mul__(self, other):
        if not isinstance(other, ComplexQuaternion):
            return ComplexQuaternion(*(a * other for a in self.components))
        return qmul(self, other)

    def __rmul__(self, other):
        return ComplexQuaternion(*(other * a for a in self.components))

    def conj(self):
        """``conj_H(Q) = Q0 - Q`` (the component unit ``i`` is untouched)."""
        return ComplexQuaternion(self.q0, -self.q1, -self.q2, -self.q3)

    def values(self):
        return ComplexQuaternion(*(_values(c) for c in self.components))

    def magnitude(self):
        return np.sqrt(sum(np.abs(_values(c)) ** 2 for c in self.components))

    def __repr__(self):
        return f"ComplexQuaternion({self.q0!r}, {self.q1!r}, {self.q2!r}, {self.q3!r})"


ONE = ComplexQuaternion(1 + 0j)
I = ComplexQuaternion(0j, 1 + 0j, 0j, 0j)
J = ComplexQuaternion(0j, 0j, 1 + 0j, 0j)
K = ComplexQuaternion(0j, 0j, 0j, 1 + 0j)


def qmul(a, b):
    """Hamilton product ``a0 b0 - <a, b> + a0 b + b0 a + a x b``."""
    a, b = ComplexQuaternion.coerce(a), ComplexQuaternion.coerce(b)
    a0, a1, a2, a3 = a.components
    b0, b1, b2, b3 = b.components
    return ComplexQuaternion(
        a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
        a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
        a0 * b2 + a2 * b0 + a3 * b1 - a1 * b3,
        a0 * b3 + a3 * b0 + a1 * b2 - a2 * b1,
    )


class QuaternionField3D:
    """Field of complex quaternions; ``func(coords, order)`` returns jets."""

    ndim = 3

    def __init__(self, func, label=None):
        self._func = func
        self.label = label

    @classmethod
    def from_components(cls, q0=0, q1=0, q2=0, q3=0, params=None):
        comps = [ScalarField.from_expr(c, params, 3) if isinstance(c, str) else ScalarField.coerce(c, 3)
                 for c in (q0, q1, q2, q3)]
        return cls(lambda c, o: ComplexQuaternion(*(s._func(c, o) for s in comps)))

    @classmethod
    def vector(cls, v1, v2, v3, params=None):
        return cls.from_components(0, v1, v2, v3, params)

    @classmethod
    def coerce(cls, other):
        if isinstance(other, QuaternionField3D):
            return other
        if isinstance(other, (ScalarField, str)):
            return cls.from_components(other)
        q = ComplexQuaternion.coerce(other)
        return cls.from_components(*(ScalarField.constant(complex(c), 3) for c in q.components))

    def jet(self, x, y, z, order=2):
        return self._func(as_coords((x, y, z), 3), order)

    def __call__(self, x, y, z):
        return self.jet(x, y, z, order=0).values()

    def component(self, index):
        return ScalarField(lambda c, o: self._func(c, o).components[index], 3)

    def map(self, fn):
        return QuaternionField3D(lambda c, o: fn(self._func(c, o)))

    def _binary(self, other, op):
        other = other if isinstance(other, QuaternionField3D) else QuaternionField3D.coerce(other)
        return QuaternionField3D(lambda c, o: op(self._func(c, o), other._func(c, o)))

    def __add__(self, other):
        return self._binary(other, lambda a, b: a + b)

    __radd__ = __add__

    def __sub__(self, other):
        return self._binary(other, lambda a, b: a - b)

    def __mul__(self, other):
        return self._binary(other, qmul)

    def __rmul__(self, other):
        return self._binary(other, lambda a, b: qmul(b, a))

    def __neg__(self):
        return self.map(lambda q: -q)

    def conj(self):
        return self.map(ComplexQuaternion.conj)


# ---------- the operator D ----------

def dirac_jet(Q):
    """``D Q`` for a quaternion of 3D jets (one order lower)."""
    Q = ComplexQuaternion.coerce(Q)
    q0, q1, q2, q3 = Q.components
    return ComplexQuaternion(
        -(q1.d(0) + q2.d(1) + q3.d(2)),
        q0.d(0) + q3.d(1) - q2.d(2),
        q0.d(1) + q1.d(2) - q3.d(0),
        q0.d(2) + q2.d(0) - q1.d(1),
    )


def dirac_field(Q):
    Q = QuaternionField3D.coerce(Q)
    return QuaternionField3D(lambda c, o: dirac_jet(Q._func(c, o + 1)))


def dirac_D(Q, point):
    Q = QuaternionField3D.coerce(Q)
    return dirac_jet(Q._func(as_coords(point, 3), 1)).values()


def _log_gradient(fj):
    """``Df / f`` as a vector quaternion jet (one order below ``fj``)."""
    inv = fj.truncate(fj.order - 1).reciprocal()
    return ComplexQuaternion.vector(fj.d(0) * inv, fj.d(1) * inv, fj.d(2) * inv)


def _scalar_jets(field, coords, order):
    return ScalarField.coerce(field, 3)._func(coords, order)


def _check_nonvanishing(fj, name="f"):
    if np.any(np.abs(fj.value) <= 1e-300):
        raise CoefficientError(f"{name} vanishes")


def factorization_residual_3d(g, f, nu, point):
    """``(D + M^P)(D - M^P) g - (-lap + nu) g`` with ``P = Df/f``."""
    coords = as_coords(point, 3)
    gj = _scalar_jets(g, coords, 2)
    fj = _scalar_jets(f, coords, 2)
    _check_nonvanishing(fj)
    P = _log_gradient(fj)
    V = dirac_jet(ComplexQuaternion.coerce(gj)) - qmul(ComplexQuaternion.coerce(gj), P)
    lhs = dirac_jet(V) + qmul(V, P)
    rhs = -gj.laplacian() + _scalar_jets(nu, coords, 0) * gj.truncate(0)
    return (lhs - rhs).values()


def dirac_plus_residual(F, f, point):
    """``(D + M^{Df/f}) F`` at ``point``."""
    coords = as_coords(point, 3)
    Fj = QuaternionField3D.coerce(F)._func(coords, 1)
    fj = _scalar_jets(f, coords, 1)
    return (dirac_jet(Fj) + qmul(Fj, _log_gradient(fj))).values()


def schrodinger_residual_3d(g, nu, point):
    """``(-lap + nu) g``."""
    coords = as_coords(point, 3)
    gj = _scalar_jets(g, coords, 2)
    return (-gj.laplacian() + _scalar_jets(nu, coords, 0) * gj.truncate(0)).value


def schr_to_dirac(g, f, nu=None, check_points=None, tol=SOLUTION_TOL):
    """``F = f D(g / f)``, a solution of ``(D + M^{Df/f}) F = 0``.

    With ``nu`` and ``check_points`` given, ``g`` and ``f`` are first checked
    to solve ``(-lap + nu) u = 0`` there (relative tolerance ``tol``).
    """
    g = ScalarField.coerce(g, 3)
    f = ScalarField.coerce(f, 3)
    if nu is not None and check_points is not None:
        for name, u in (("g", g), ("f", f)):
            coords = as_coords(check_points, 3)
            uj = u._func(coords, 2)
            res = schrodinger_residual_3d(u, nu, check_points)
            scale = np.maximum(1.0, np.abs(uj.laplacian().value))
            if np.max(np.abs(res) / scale) > tol:
                raise CoefficientError(f"{name} does not solve (-lap + nu) u = 0 within {tol:.1e}")
    h = g / f

    def func(c, o):
        Dh = dirac_jet(ComplexQuaternion.coerce(h._func(c, o + 1)))
        return Dh * f._func(c, o)

    return QuaternionField3D(func, label="f D(g/f)")


def _antigradient_values(G, base, x, y, z, compat_tol, rtol):
    x0, y0, z0 = (float(b) for b in base)
    shape = x.shape
    x, y, z = x.ravel(), y.ravel(), z.ravel()

    def compute(idx, panels):
        t, _ = quadrature.panel_nodes(panels)
        t = t[None, :]
        xi, yi, zi = x[idx, None], y[idx, None], z[idx, None]
        ones = np.ones_like(t)
        legs = [
            (x0 + t * (xi - x0), y0 * ones, z0 * ones, 0, xi[:, 0] - x0),
            (xi * ones, y0 + t * (yi - y0), z0 * ones, 1, yi[:, 0] - y0),
            (xi * ones, yi * ones, z0 + t * (zi - z0), 2, zi[:, 0] - z0),
        ]
        total = 0
        scale = 0
        for lx, ly, lz, axis, length in legs:
            coords = tuple(np.broadcast_arrays(lx, ly, lz))
            if compat_tol is not None:
                _check_curl(G, coords, compat_tol)
            vals = G._func(coords, 0).vec[axis].value
            total = total + quadrature.integrate(vals, panels) * length
            scale = scale + np.abs(length) * np.max(np.abs(vals), axis=1)
        return total, scale

    return quadrature.adaptive(compute, x.size, rtol=rtol, what="antigradient").reshape(shape)


def _check_curl(G, coords, tol):
    Gj = G._func(coords, 1)
    g1, g2, g3 = Gj.vec
    curl = (g3.dy - g2.dz3, g1.dz3 - g3.dx, g2.dx - g1.dy)
    worst = max(float(np.max(np.abs(c))) for c in curl)
    if worst > tol:
        raise CompatibilityError(f"vector field is not a gradient: |rot G| reaches {worst:.3e} > {tol:.1e}")


def antigradient_field(G, base, C=0.0, compat_tol=DEFAULT_COMPAT_TOL, rtol=quadrature.DEFAULT_RTOL):
    """Scalar field ``phi`` with ``grad phi = G`` and ``phi(base) = C``; three-leg path x, y, z."""
    G = QuaternionField3D.coerce(G)

    def func(c, o):
        value = _antigradient_values(G, base, *c, compat_tol, rtol) + C
        if o == 0:
            return Jet.constant(value, 3, 0)
        return Jet.from_gradient(value, list(G._func(c, o - 1).vec))

    return ScalarField(func, 3, label="antigradient")


def antigradient_3d(G, base, target, C=0.0, compat_tol=DEFAULT_COMPAT_TOL):
    return antigradient_field(G, base, C, compat_tol)(*target)


def dirac_to_schr(F, f, base, C=0.0, compat_tol=DEFAULT_COMPAT_TOL):
    """``g = f A[F / f]``; determined up to ``const * f``."""
    F = QuaternionField3D.coerce(F)
    f = ScalarField.coerce(f, 3)
    inv = f.reciprocal()
    scaled = QuaternionField3D(lambda c, o: F._func(c, o) * inv._func(c, o))
    return f * antigradient_field(scaled, base, C, compat_tol)


def divpgradq_residual_3d(phi, p, q, u0, point, params=None):
    """``(div p grad + q) phi + sqrt(p) (D + M^P)(D - M^P)(sqrt(p) phi)``, ``P = Df/f``, ``f = sqrt(p) u0``."""
    coeffs = p if isinstance(p, EllipticCoefficients) else EllipticCoefficients(
        *(ScalarField.from_expr(e, params, 3) if isinstance(e, str) else ScalarField.coerce(e, 3)
          for e in (p, q, u0)))
    coords = as_coords(point, 3)
    phi = ScalarField.coerce(phi, 3) if not isinstance(phi, str) else ScalarField.from_expr(phi, params, 3)
    lhs = coeffs.operator(phi)._func(coords, 0)
    sp = coeffs.p.sqrt()._func(coords, 2)
    fj = coeffs.f._func(coords, 2)
    _check_nonvanishing(fj)
    P = _log_gradient(fj)
    g = ComplexQuaternion.coerce(sp * phi._func(coords, 2))
    V = dirac_jet(g) - qmul(g, P)
    inner = dirac_jet(V) + qmul(V, P)
    rhs = inner * (-sp.truncate(0))
    return (ComplexQuaternion.coerce(lhs) - rhs).values()


def vekua3d_residual(W, f, point, system=False):
    """``D W - (Df/f) conj_H(W)``.

    With ``system=True`` also returns ``div(f W_vec)`` and the vector
    ``rot(f W_vec) / f + f grad(W0 / f)``, which vanish together with it.
    """
    coords = as_coords(point, 3)
    Wj = QuaternionField3D.coerce(W)._func(coords, 1)
    fj = _scalar_jets(f, coords, 1)
    _check_nonvanishing(fj)
    P = _log_gradient(fj)
    main = (dirac_jet(Wj) - qmul(P, Wj.conj())).values()
    if not system:
        return main
    fW = ComplexQuaternion.vector(*(fj * c for c in Wj.vec))
    DfW = dirac_jet(fW)
    div = -DfW.q0.value
    h = Wj.q0 / fj
    ft = fj.truncate(0)
    rot = ComplexQuaternion.vector(DfW.q1 / ft + ft * h.d(0), DfW.q2 / ft + ft * h.d(1),
                                   DfW.q3 / ft + ft * h.d(2)).values()
    return main, div, rot


def second_kind_residual_3d(w, f, point):
    """``D w - ((1 - f^2)/(1 + f^2)) D conj_H(w)``."""
    coords = as_coords(point, 3)
    wj = QuaternionField3D.coerce(w)._func(coords, 1)
    fv = _scalar_jets(f, coords, 0).value
    if np.any(np.abs(1 + fv ** 2) <= 1e-12 * (1 + np.abs(fv) ** 2)):
        raise CoefficientError("1 + f^2 vanishes")
    ratio = (1 - fv ** 2) / (1 + fv ** 2)
    return (dirac_jet(wj) - dirac_jet(wj.conj()) * ratio).values()


def quartet(f):
    """The solutions ``f, i/f, j/f, k/f`` of the main 3D Vekua equation."""
    f = ScalarField.coerce(f, 3)
    inv = f.reciprocal()
    return (QuaternionField3D.from_components(f), QuaternionField3D.from_components(0, inv),
            QuaternionField3D.from_components(0, 0, inv), QuaternionField3D.from_components(0, 0, 0, inv))

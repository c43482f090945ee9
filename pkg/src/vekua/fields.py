"""Scalar and bicomplex fields on planar domains and the calculus acting on them.

A field is a pure function from a batch of points to jets.  Fields built from
expressions differentiate exactly through :mod:`vekua.jets`; fields built by
integration (antiderivatives, formal powers) get their derivatives from the
integrand, so derivatives never come from finite differences.

With ``z = x + k y``::

    d_zbar = (d_x + k d_y) / 2        d_z = (d_x - k d_y) / 2
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import quadrature
from .bicomplex import Bicomplex
from .errors import CompatibilityError
from .exprlang import COORDINATES, evaluate, parse
from .jets import Jet, variables

DEFAULT_COMPAT_TOL = 1e-7


def as_coords(point, ndim=None):
    coords = tuple(np.asarray(c, dtype=float) for c in point)
    if ndim is not None and len(coords) != ndim:
        raise ValueError(f"expected {ndim} coordinates, got {len(coords)}")
    return tuple(np.broadcast_arrays(*coords))


class ScalarField:
    """Complex-valued field; ``func(coords, order)`` returns a :class:`Jet`."""

    def __init__(self, func, ndim=2, label=None):
        self._func = func
        self.ndim = ndim
        self.label = label

    @classmethod
    def from_expr(cls, e, bindings=None, ndim=2, coordinates=None):
        bindings = dict(bindings or {})
        coordinates = coordinates or COORDINATES[:ndim]
        tree = parse(e, bindings, coordinates) if isinstance(e, str) else e

        def func(coords, order):
            env = dict(zip(coordinates, variables(coords, order)))
            return evaluate(tree, env, bindings)

        return cls(func, ndim, label=e if isinstance(e, str) else None)

    @classmethod
    def constant(cls, value, ndim=2):
        def func(coords, order):
            return Jet.constant(np.broadcast_to(complex(value), coords[0].shape), ndim, order)

        return cls(func, ndim, label=repr(value))

    @classmethod
    def coerce(cls, other, ndim=2):
        if isinstance(other, ScalarField):
            return other
        if isinstance(other, str):
            return cls.from_expr(other, ndim=ndim)
        return cls.constant(other, ndim)

    def jet(self, *coords, order=2):
        return self._func(as_coords(coords, self.ndim), order)

    def __call__(self, *coords):
        return self.jet(*coords, order=0).value

    def map(self, fn, label=None):
        """Field whose jet is ``fn(jet)``; ``fn`` must preserve the order."""
        return ScalarField(lambda c, o: fn(self._func(c, o)), self.ndim, label)

    def _binary(self, other, op):
        if isinstance(other, BicomplexField):
            return NotImplemented
        other = ScalarField.coerce(other, self.ndim)
        return ScalarField(lambda c, o: op(self._func(c, o), other._func(c, o)), self.ndim)

    def __add__(self, other):
        return self._binary(other, lambda a, b: a + b)

    def __radd__(self, other):
        return self._binary(other, lambda a, b: b + a)

    def __sub__(self, other):
        return self._binary(other, lambda a, b: a - b)

    def __rsub__(self, other):
        return self._binary(other, lambda a, b: b - a)

    def __mul__(self, other):
        return self._binary(other, lambda a, b: a * b)

    def __rmul__(self, other):
        return self._binary(other, lambda a, b: b * a)

    def __truediv__(self, other):
        return self._binary(other, lambda a, b: a / b)

    def __rtruediv__(self, other):
        return self._binary(other, lambda a, b: b / a)

    def __neg__(self):
        return self.map(lambda j: -j)

    def __pow__(self, n):
        return self.map(lambda j: j ** n)

    def sqrt(self):
        return self.map(Jet.sqrt)

    def exp(self):
        return self.map(Jet.exp)

    def reciprocal(self):
        return self.map(Jet.reciprocal)

    def derivative(self, axis):
        """Partial derivative field (needs one extra order from the parent)."""
        return ScalarField(lambda c, o: self._func(c, o + 1).d(axis), self.ndim)

    def laplacian(self):
        return ScalarField(lambda c, o: self._func(c, o + 2).laplacian(), self.ndim)

    def __repr__(self):
        return f"ScalarField({self.label or '<composed>'})"


class BicomplexField:
    """Bicomplex-valued field ``W = W1 + W2 k`` on a planar domain."""

    ndim = 2

    def __init__(self, func, label=None):
        self._func = func
        self.label = label

    @classmethod
    def from_components(cls, sc, vec=0):
        sc = ScalarField.coerce(sc)
        vec = ScalarField.coerce(vec)
        return cls(lambda c, o: Bicomplex(sc._func(c, o), vec._func(c, o)))

    @classmethod
    def from_exprs(cls, sc, vec="0", bindings=None):
        return cls.from_components(ScalarField.from_expr(sc, bindings),
                                   ScalarField.from_expr(vec, bindings))

    @classmethod
    def constant(cls, q):
        q = Bicomplex.coerce(q)
        return cls.from_components(ScalarField.constant(q.sc), ScalarField.constant(q.vec))

    @classmethod
    def coerce(cls, other):
        if isinstance(other, BicomplexField):
            return other
        if isinstance(other, ScalarField):
            return cls.from_components(other)
        return cls.constant(other)

    def jet(self, x, y, order=2):
        return self._func(as_coords((x, y), 2), order)

    def __call__(self, x, y):
        return self.jet(x, y, order=0).values()

    @property
    def sc(self):
        return ScalarField(lambda c, o: self._func(c, o).sc)

    @property
    def vec(self):
        return ScalarField(lambda c, o: self._func(c, o).vec)

    def map(self, fn):
        return BicomplexField(lambda c, o: fn(self._func(c, o)))

    def _binary(self, other, op):
        other = BicomplexField.coerce(other)
        return BicomplexField(lambda c, o: op(self._func(c, o), other._func(c, o)))

    def __add__(self, other):
        return self._binary(other, lambda a, b: a + b)

    __radd__ = __add__

    def __sub__(self, other):
        return self._binary(other, lambda a, b: a - b)

    def __rsub__(self, other):
        return self._binary(other, lambda a, b: b - a)

    def __mul__(self, other):
        return self._binary(other, lambda a, b: a * b)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self._binary(other, lambda a, b: a / b)

    def __rtruediv__(self, other):
        return self._binary(other, lambda a, b: b / a)

    def __neg__(self):
        return self.map(lambda q: -q)

    def __pow__(self, n):
        return self.map(lambda q: q ** n)

    def conj(self):
        return self.map(Bicomplex.conj)

    def __repr__(self):
        return f"BicomplexField({self.label or '<composed>'})"


# ---------- differential operators ----------

def dzbar_jet(W):
    """``(W_x + k W_y) / 2`` for a bicomplex of jets (result one order lower)."""
    W = Bicomplex.coerce(W)
    return Bicomplex(0.5 * (W.sc.d(0) - W.vec.d(1)), 0.5 * (W.vec.d(0) + W.sc.d(1)))


def dz_jet(W):
    """``(W_x - k W_y) / 2`` for a bicomplex of jets (result one order lower)."""
    W = Bicomplex.coerce(W)
    return Bicomplex(0.5 * (W.sc.d(0) + W.vec.d(1)), 0.5 * (W.vec.d(0) - W.sc.d(1)))


def dzbar_field(W):
    W = BicomplexField.coerce(W)
    return BicomplexField(lambda c, o: dzbar_jet(W._func(c, o + 1)))


def dz_field(W):
    W = BicomplexField.coerce(W)
    return BicomplexField(lambda c, o: dz_jet(W._func(c, o + 1)))


def d_zbar(W, point):
    W = BicomplexField.coerce(W)
    return dzbar_jet(W.jet(*point, order=1)).values()


def d_z(W, point):
    W = BicomplexField.coerce(W)
    return dz_jet(W.jet(*point, order=1)).values()


# ---------- antiderivatives ----------

def _check_compat(Phi, xs, ys, sign, tol):
    jet = Phi.jet(xs, ys, order=1)
    residual = jet.sc.dy + sign * jet.vec.dx
    worst = np.max(np.abs(residual)) if residual.size else 0.0
    if worst > tol:
        which = "d_y Phi1 + d_x Phi2" if sign > 0 else "d_y Phi1 - d_x Phi2"
        raise CompatibilityError(
            f"integrand is not an exact differential: |{which}| reaches {worst:.3e} > {tol:.1e}"
        )


def _two_leg(Phi, base, x, y, sign, compat_tol, rtol):
    """2 * (int_{x0}^{x} Phi1(eta, y) d eta - sign * int_{y0}^{y} Phi2(x0, xi) d xi)."""
    x0, y0 = float(base[0]), float(base[1])
    shape = x.shape
    x, y = x.ravel(), y.ravel()

    def compute(idx, panels):
        t, _ = quadrature.panel_nodes(panels)
        xi, yi = x[idx, None], y[idx, None]
        # leg 1: vertical at x0, leg 2: horizontal at height y
        vx = np.broadcast_to(x0, (idx.size, t.size))
        vy = y0 + t[None, :] * (yi - y0)
        hx = x0 + t[None, :] * (xi - x0)
        hy = np.broadcast_to(yi, (idx.size, t.size))
        if compat_tol is not None:
            _check_compat(Phi, np.concatenate([vx, hx], axis=1), np.concatenate([vy, hy], axis=1),
                          sign, compat_tol)
        vert = Phi(vx, vy).vec
        horiz = Phi(hx, hy).sc
        a = quadrature.integrate(horiz, panels) * (xi[:, 0] - x0)
        b = quadrature.integrate(vert, panels) * (yi[:, 0] - y0)
        scale = np.abs(xi[:, 0] - x0) * np.max(np.abs(horiz), axis=1) + \
            np.abs(yi[:, 0] - y0) * np.max(np.abs(vert), axis=1)
        return 2.0 * (a - sign * b), scale

    out = quadrature.adaptive(compute, x.size, rtol=rtol, what="antiderivative")
    return out.reshape(shape)


def antiderivative_field(Phi, base, c=0.0, kind="A", compat_tol=DEFAULT_COMPAT_TOL,
                         rtol=quadrature.DEFAULT_RTOL):
    """Scalar field ``A[Phi]`` (``d_z`` inverse) or ``Abar[Phi]`` (``d_zbar`` inverse).

    ``base`` is the point where the result equals ``c``; the path runs
    vertically from the base and then horizontally to the target, so the
    domain must contain these two-leg paths.
    """
    Phi = BicomplexField.coerce(Phi)
    if kind not in ("A", "Abar"):
        raise ValueError("kind must be 'A' or 'Abar'")
    sign = 1.0 if kind == "A" else -1.0

    def func(coords, order):
        x, y = coords
        value = _two_leg(Phi, base, x, y, sign, compat_tol, rtol) + c
        if order == 0:
            return Jet.constant(value, 2, 0)
        g = Phi._func(coords, order - 1)
        return Jet.from_gradient(value, [2.0 * g.sc, -2.0 * sign * g.vec])

    return ScalarField(func, 2, label=f"{kind}[...]")


def antiderivative_A(Phi, base, target, c=0.0, compat_tol=DEFAULT_COMPAT_TOL):
    """Scalar ``phi`` with ``d_z phi = Phi`` and ``phi(base) = c``, evaluated at ``target``."""
    return antiderivative_field(Phi, base, c, "A", compat_tol)(*target)


def antiderivative_Abar(Phi, base, target, c=0.0, compat_tol=DEFAULT_COMPAT_TOL):
    """Scalar ``phi`` with ``d_zbar phi = Phi`` and ``phi(base) = c``, evaluated at ``target``."""
    return antiderivative_field(Phi, base, c, "Abar", compat_tol)(*target)


# ---------- line integrals ----------

@dataclass(frozen=True)
class Segment:
    start: tuple
    end: tuple
    nodes: int = quadrature.DEFAULT_NODES
    rtol: float = quadrature.DEFAULT_RTOL


def segment_integrals(W, starts, ends, rtol=quadrature.DEFAULT_RTOL, n=quadrature.DEFAULT_NODES):
    """``int W dz`` along straight segments, ``dz = dx + k dy``; batched over segments."""
    W = BicomplexField.coerce(W)
    starts = np.atleast_2d(np.asarray(starts, dtype=float))
    ends = np.atleast_2d(np.asarray(ends, dtype=float))
    dx = ends[:, 0] - starts[:, 0]
    dy = ends[:, 1] - starts[:, 1]

    def compute(idx, panels):
        t, _ = quadrature.panel_nodes(panels, n)
        xs = starts[idx, 0, None] + t[None, :] * dx[idx, None]
        ys = starts[idx, 1, None] + t[None, :] * dy[idx, None]
        w = W(xs, ys)
        # W * (dx + k dy)
        sc = w.sc * dx[idx, None] - w.vec * dy[idx, None]
        vec = w.sc * dy[idx, None] + w.vec * dx[idx, None]
        res = np.stack([quadrature.integrate(sc, panels, n), quadrature.integrate(vec, panels, n)])
        length = np.hypot(dx[idx], dy[idx])
        scale = length * np.max(np.sqrt(np.abs(w.sc) ** 2 + np.abs(w.vec) ** 2), axis=1)
        return res, scale

    res = quadrature.adaptive(compute, starts.shape[0], rtol=rtol, what="line integral")
    return Bicomplex(res[0], res[1])


def line_integral(W, seg):
    """Bicomplex ``int_seg W dz`` by composite Gauss-Legendre panels."""
    out = segment_integrals(W, [seg.start], [seg.end], seg.rtol, seg.nodes)
    return Bicomplex(complex(out.sc[0]), complex(out.vec[0]))

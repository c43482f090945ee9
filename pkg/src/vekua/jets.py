"""Truncated multivariate Taylor arithmetic.

A :class:`Jet` carries the Taylor coefficients of a function of ``nvars``
real variables up to total degree ``order`` at a batch of points.  Every
coefficient array has the batch shape as its trailing dimensions, so one jet
describes the same function evaluated at many points at once.

Arithmetic is forward-mode automatic differentiation: products are truncated
Cauchy products and elementary functions are applied by composing their
univariate Taylor series with the nilpotent part of the argument.  Order 2
jets in two variables are the value/first/second-partials records used
throughout the package; higher orders are used for Taylor coefficients of
pseudoanalytic functions.
"""

from __future__ import annotations

import math
import numbers
from functools import lru_cache

import numpy as np

from .errors import ExprDomainError

_AXIS_NAMES = {"x": 0, "y": 1, "z3": 2}


def _compositions(total, parts):
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


@lru_cache(maxsize=None)
def multi_indices(nvars, order):
    """Multi-indices of total degree <= order, grouped by degree."""
    out = []
    for deg in range(order + 1):
        out.extend(_compositions(deg, nvars))
    return tuple(out)


@lru_cache(maxsize=None)
def _position(nvars, order):
    return {a: i for i, a in enumerate(multi_indices(nvars, order))}


@lru_cache(maxsize=None)
def _product_table(nvars, order):
    idx = multi_indices(nvars, order)
    pos = _position(nvars, order)
    table = [[] for _ in idx]
    for i, a in enumerate(idx):
        for j, b in enumerate(idx):
            c = tuple(p + q for p, q in zip(a, b))
            if sum(c) <= order:
                table[pos[c]].append((i, j))
    return tuple(tuple(t) for t in table)


@lru_cache(maxsize=None)
def _derivative_table(nvars, order, axis):
    # (target index in order-1 table, source index, multiplier)
    src = _position(nvars, order)
    out = []
    for k, a in enumerate(multi_indices(nvars, order - 1)):
        b = list(a)
        b[axis] += 1
        out.append((k, src[tuple(b)], b[axis]))
    return tuple(out)


def _as_complex(a):
    return np.asarray(a, dtype=complex)


def _lift(coef, ndim):
    """Insert batch axes after the coefficient axis so batches broadcast."""
    missing = ndim - (coef.ndim - 1)
    if missing <= 0:
        return coef
    return coef.reshape(coef.shape[:1] + (1,) * missing + coef.shape[1:])


def _foreign(other):
    return not isinstance(other, (Jet, numbers.Number, np.ndarray, np.generic))


class Jet:
    """Taylor coefficients of a complex-valued function of ``nvars`` variables.

    ``coef[k]`` is the coefficient of ``multi_indices(nvars, order)[k]``,
    i.e. the partial derivative divided by the multi-index factorial.
    """

    __slots__ = ("coef", "nvars", "order")
    __array_ufunc__ = None

    def __init__(self, coef, nvars, order):
        self.coef = coef
        self.nvars = nvars
        self.order = order

    # ---------- construction ----------
    @classmethod
    def constant(cls, value, nvars, order):
        value = _as_complex(value)
        coef = np.zeros((len(multi_indices(nvars, order)),) + value.shape, dtype=complex)
        coef[0] = value
        return cls(coef, nvars, order)

    @classmethod
    def variable(cls, value, axis, nvars, order):
        jet = cls.constant(value, nvars, order)
        if order >= 1:
            e = [0] * nvars
            e[axis] = 1
            jet.coef[_position(nvars, order)[tuple(e)]] = 1.0
        return jet

    @classmethod
    def from_gradient(cls, value, grads):
        """Jet of a function from its value and the jets of its partials.

        ``grads[i]`` is the jet of the i-th partial derivative, of order
        ``order - 1``.  Mixed coefficients are taken from the lowest axis that
        can supply them, so the gradient is assumed to be exact (curl free).
        """
        value = _as_complex(value)
        nvars = grads[0].nvars
        order = min(g.order for g in grads) + 1
        idx = multi_indices(nvars, order)
        sub = _position(nvars, order - 1)
        shape = np.broadcast_shapes(value.shape, *(g.coef.shape[1:] for g in grads))
        coef = np.zeros((len(idx),) + shape, dtype=complex)
        coef[0] = value
        for k, a in enumerate(idx[1:], start=1):
            axis = next(i for i, v in enumerate(a) if v)
            b = list(a)
            b[axis] -= 1
            coef[k] = grads[axis].coef[sub[tuple(b)]] / a[axis]
        return cls(coef, nvars, order)

    def _coerce(self, other):
        if isinstance(other, Jet):
            if other.nvars != self.nvars:
                raise ValueError("jets over different numbers of variables")
            return other
        return Jet.constant(other, self.nvars, self.order)

    def truncate(self, order):
        if order >= self.order:
            return self
        n = len(multi_indices(self.nvars, order))
        return Jet(self.coef[:n], self.nvars, order)

    def embed(self, nvars):
        """The same function of more variables, constant in the new ones."""
        if nvars < self.nvars:
            raise ValueError("cannot embed into fewer variables")
        pos = _position(nvars, self.order)
        pad = (0,) * (nvars - self.nvars)
        coef = np.zeros((len(pos),) + self.coef.shape[1:], dtype=complex)
        for k, a in enumerate(multi_indices(self.nvars, self.order)):
            coef[pos[a + pad]] = self.coef[k]
        return Jet(coef, nvars, self.order)

    def _aligned(self, other):
        other = self._coerce(other)
        order = min(self.order, other.order)
        return self.truncate(order), other.truncate(order), order

    # ---------- access ----------
    @property
    def value(self):
        return self.coef[0]

    @property
    def shape(self):
        return self.coef.shape[1:]

    def partial(self, *axes):
        """Partial derivative value; axes are ints or names 'x', 'y', 'z3'."""
        a = [0] * self.nvars
        for ax in axes:
            a[_AXIS_NAMES.get(ax, ax)] += 1
        if sum(a) > self.order:
            raise ValueError(f"jet of order {self.order} has no derivative of order {sum(a)}")
        scale = math.prod(math.factorial(v) for v in a)
        return self.coef[_position(self.nvars, self.order)[tuple(a)]] * scale

    dx = property(lambda self: self.partial(0))
    dy = property(lambda self: self.partial(1))
    dz3 = property(lambda self: self.partial(2))
    dxx = property(lambda self: self.partial(0, 0))
    dxy = property(lambda self: self.partial(0, 1))
    dyy = property(lambda self: self.partial(1, 1))

    def gradient(self):
        return np.stack([self.partial(i) for i in range(self.nvars)])

    def hessian(self):
        n = self.nvars
        return np.stack([np.stack([self.partial(i, j) for j in range(n)]) for i in range(n)])

    def laplacian_value(self):
        return sum(self.partial(i, i) for i in range(self.nvars))

    def d(self, axis):
        """Jet of the partial derivative along ``axis`` (one order lower)."""
        axis = _AXIS_NAMES.get(axis, axis)
        if self.order == 0:
            raise ValueError("cannot differentiate an order-0 jet")
        table = _derivative_table(self.nvars, self.order, axis)
        coef = np.empty((len(table),) + self.shape, dtype=complex)
        for k, src, mult in table:
            coef[k] = mult * self.coef[src]
        return Jet(coef, self.nvars, self.order - 1)

    def laplacian(self):
        return sum((self.d(i).d(i) for i in range(1, self.nvars)), self.d(0).d(0))

    def __getitem__(self, item):
        return Jet(self.coef[(slice(None),) + (item if isinstance(item, tuple) else (item,))],
                   self.nvars, self.order)

    def __repr__(self):
        return f"Jet(nvars={self.nvars}, order={self.order}, value={self.value!r})"

    # ---------- arithmetic ----------
    def __add__(self, other):
        if _foreign(other):
            return NotImplemented
        a, b, order = self._aligned(other)
        ndim = max(a.coef.ndim, b.coef.ndim) - 1
        return Jet(_lift(a.coef, ndim) + _lift(b.coef, ndim), self.nvars, order)

    __radd__ = __add__

    def __sub__(self, other):
        if _foreign(other):
            return NotImplemented
        a, b, order = self._aligned(other)
        ndim = max(a.coef.ndim, b.coef.ndim) - 1
        return Jet(_lift(a.coef, ndim) - _lift(b.coef, ndim), self.nvars, order)

    def __rsub__(self, other):
        if _foreign(other):
            return NotImplemented
        return self._coerce(other) - self

    def __neg__(self):
        return Jet(-self.coef, self.nvars, self.order)

    def __pos__(self):
        return self

    def __mul__(self, other):
        if _foreign(other):
            return NotImplemented
        if not isinstance(other, Jet):
            c = _as_complex(other)
            return Jet(_lift(self.coef, c.ndim) * c[None], self.nvars, self.order)
        a, b, order = self._aligned(other)
        if order == 0:
            ndim = max(a.coef.ndim, b.coef.ndim) - 1
            return Jet(_lift(a.coef, ndim) * _lift(b.coef, ndim), self.nvars, 0)
        table = _product_table(self.nvars, order)
        shape = np.broadcast_shapes(a.shape, b.shape)
        coef = np.empty((len(table),) + shape, dtype=complex)
        for k, pairs in enumerate(table):
            acc = a.coef[pairs[0][0]] * b.coef[pairs[0][1]]
            for i, j in pairs[1:]:
                acc = acc + a.coef[i] * b.coef[j]
            coef[k] = acc
        return Jet(coef, self.nvars, order)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if _foreign(other):
            return NotImplemented
        if not isinstance(other, Jet):
            c = _as_complex(other)
            if np.any(c == 0):
                raise ExprDomainError("division by zero")
            return Jet(_lift(self.coef, c.ndim) / c[None], self.nvars, self.order)
        return self * other.reciprocal()

    def __rtruediv__(self, other):
        if _foreign(other):
            return NotImplemented
        return self.reciprocal() * other

    def __pow__(self, n):
        if isinstance(n, (bool, np.bool_)) or not isinstance(n, (int, np.integer)):
            raise TypeError("jets only support integer exponents")
        n = int(n)
        if n < 0:
            return self.reciprocal() ** (-n)
        result = Jet.constant(np.ones(self.shape), self.nvars, self.order)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    # ---------- elementary functions ----------
    def _compose(self, series):
        """Apply sum_k series[k] * h**k, h = self - value."""
        if self.order == 0:
            return Jet(_as_complex(series[0])[None] * np.ones_like(self.coef), self.nvars, 0)
        h = Jet(self.coef.copy(), self.nvars, self.order)
        h.coef[0] = 0.0
        result = Jet.constant(np.broadcast_to(series[self.order], self.shape), self.nvars, self.order)
        for k in range(self.order - 1, -1, -1):
            result = result * h + series[k]
        return result

    def _check_nonzero(self, what):
        if np.any(self.value == 0):
            raise ExprDomainError(f"{what} at zero")

    def reciprocal(self):
        self._check_nonzero("division by zero: reciprocal")
        u = self.value
        return self._compose([(-1) ** k / u ** (k + 1) for k in range(self.order + 1)])

    def exp(self):
        e = np.exp(self.value)
        return self._compose([e / math.factorial(k) for k in range(self.order + 1)])

    def log(self):
        self._check_nonzero("log")
        u = self.value
        series = [np.log(u)] + [(-1) ** (k + 1) / (k * u ** k) for k in range(1, self.order + 1)]
        return self._compose(series)

    def sqrt(self):
        u = self.value
        if self.order > 0:
            self._check_nonzero("sqrt branch point")
        r = np.sqrt(u)
        series = [r]
        for k in range(1, self.order + 1):
            series.append(_binom_half(k) * r / u ** k)
        return self._compose(series)

    def sin(self):
        u = self.value
        s, c = np.sin(u), np.cos(u)
        cyc = (s, c, -s, -c)
        return self._compose([cyc[k % 4] / math.factorial(k) for k in range(self.order + 1)])

    def cos(self):
        u = self.value
        s, c = np.sin(u), np.cos(u)
        cyc = (c, -s, -c, s)
        return self._compose([cyc[k % 4] / math.factorial(k) for k in range(self.order + 1)])

    def sinh(self):
        u = self.value
        cyc = (np.sinh(u), np.cosh(u))
        return self._compose([cyc[k % 2] / math.factorial(k) for k in range(self.order + 1)])

    def cosh(self):
        u = self.value
        cyc = (np.cosh(u), np.sinh(u))
        return self._compose([cyc[k % 2] / math.factorial(k) for k in range(self.order + 1)])

    def _atan_nilpotent(self):
        # arctan of a jet with zero constant term
        series = [np.zeros(self.shape, dtype=complex)]
        for k in range(1, self.order + 1):
            series.append(0.0 if k % 2 == 0 else (-1) ** ((k - 1) // 2) / k)
        return self._compose(series)

    @staticmethod
    def atan2(y, x):
        """Polar angle of (x, y); the base values must be real."""
        if not isinstance(y, Jet):
            y = x._coerce(y)
        x = y._coerce(x)
        y, x, order = y._aligned(x)
        y0, x0 = y.value, x.value
        tiny = 1e-12 * (np.abs(x0) + np.abs(y0) + 1e-300)
        if np.any(np.abs(x0.imag) > tiny) or np.any(np.abs(y0.imag) > tiny):
            raise ExprDomainError("atan2 of complex arguments")
        r2 = x0.real ** 2 + y0.real ** 2
        if np.any(r2 == 0):
            raise ExprDomainError("atan2 at the origin")
        theta = np.arctan2(y0.real, x0.real)
        if order == 0:
            return Jet.constant(theta, y.nvars, 0)
        # tan(theta - theta0) = (x0*y - y0*x) / (x0*x + y0*y)
        t = (x0 * y - y0 * x) / (x0 * x + y0 * y)
        t.coef[0] = 0.0
        return t._atan_nilpotent() + theta


def _binom_half(k):
    """Generalised binomial coefficient C(1/2, k)."""
    out = 1.0
    for j in range(k):
        out *= (0.5 - j) / (j + 1)
    return out


def variables(coords, order):
    """Coordinate jets for a point batch ``coords = (x, y[, z3])``."""
    arrays = np.broadcast_arrays(*[np.asarray(c, dtype=float) for c in coords])
    n = len(arrays)
    return [Jet.variable(a, i, n, order) for i, a in enumerate(arrays)]

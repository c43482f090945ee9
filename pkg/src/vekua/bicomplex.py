"""Bicomplex numbers ``Q1 + Q2 k`` with complex ``Q1``, ``Q2``.

The imaginary unit ``i`` of the components commutes with ``k``, and
``k*k = -1``.  Components may be complex scalars, numpy arrays (a batch of
bicomplex numbers) or :class:`~vekua.jets.Jet` objects; the ring operations
only use ``+``, ``-`` and ``*`` on them.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

import numpy as np

from .errors import ZeroDivisorError
from .jets import Jet

DEFAULT_ZERO_DIVISOR_TOL = 1e-14


def _values(c):
    return c.value if isinstance(c, Jet) else np.asarray(c)


def _cmul(u, v):
    """Complex product that is bitwise commutative (vectorized products may fuse operations)."""
    if isinstance(u, Jet) or isinstance(v, Jet):
        return u * v
    if not (isinstance(u, np.ndarray) or isinstance(v, np.ndarray)):
        return u * v
    u = np.asarray(u, dtype=complex)
    v = np.asarray(v, dtype=complex)
    out = np.empty(np.broadcast_shapes(u.shape, v.shape), dtype=complex)
    out.real = u.real * v.real - u.imag * v.imag
    out.imag = u.real * v.imag + u.imag * v.real
    return out


@dataclass(frozen=True)
class Bicomplex:
    sc: Any = 0j
    vec: Any = 0j

    __array_ufunc__ = None

    @classmethod
    def coerce(cls, other):
        if isinstance(other, Bicomplex):
            return other
        return cls(other, 0 * other if isinstance(other, Jet) else 0j)

    # ring operations
    def __add__(self, other):
        o = Bicomplex.coerce(other)
        return Bicomplex(self.sc + o.sc, self.vec + o.vec)

    __radd__ = __add__

    def __sub__(self, other):
        o = Bicomplex.coerce(other)
        return Bicomplex(self.sc - o.sc, self.vec - o.vec)

    def __rsub__(self, other):
        return Bicomplex.coerce(other) - self

    def __neg__(self):
        return Bicomplex(-self.sc, -self.vec)

    def __mul__(self, other):
        if not isinstance(other, Bicomplex):
            return Bicomplex(self.sc * other, self.vec * other)
        m = _cmul
        return Bicomplex(m(self.sc, other.sc) - m(self.vec, other.vec),
                         m(self.sc, other.vec) + m(self.vec, other.sc))

    def __rmul__(self, other):
        return Bicomplex(other * self.sc, other * self.vec)

    def __truediv__(self, other):
        if not isinstance(other, Bicomplex):
            return Bicomplex(self.sc / other, self.vec / other)
        return self * inverse(other)

    def __rtruediv__(self, other):
        return inverse(self) * other

    def __pow__(self, n):
        if n < 0:
            return inverse(self) ** (-n)
        result = Bicomplex.coerce(1.0 + 0 * self.sc)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def conj(self):
        return Bicomplex(self.sc, -self.vec)

    def norm_sq(self):
        """``q * conj(q)`` reduced to its scalar part ``Q1**2 + Q2**2``."""
        return _cmul(self.sc, self.sc) + _cmul(self.vec, self.vec)

    def magnitude(self):
        """Euclidean size sqrt(|Q1|^2 + |Q2|^2) of the (batched) values."""
        return np.sqrt(np.abs(_values(self.sc)) ** 2 + np.abs(_values(self.vec)) ** 2)

    def values(self):
        """Strip jets down to their values."""
        return Bicomplex(_values(self.sc), _values(self.vec))

    def __getitem__(self, item):
        return Bicomplex(self.sc[item], self.vec[item])

    def __repr__(self):
        return f"Bicomplex({self.sc!r}, {self.vec!r})"


ONE = Bicomplex(1 + 0j, 0j)
K = Bicomplex(0j, 1 + 0j)


def mul(a, b):
    return Bicomplex.coerce(a) * Bicomplex.coerce(b)


def conj(q):
    return Bicomplex.coerce(q).conj()


def is_zero_divisor(q, tol=DEFAULT_ZERO_DIVISOR_TOL):
    """True where ``q`` is nonzero and ``q * conj(q)`` vanishes (relative ``tol``)."""
    q = Bicomplex.coerce(q)
    s, v = _values(q.sc), _values(q.vec)
    size = np.abs(s) ** 2 + np.abs(v) ** 2
    return (size > 0) & (np.abs(s * s + v * v) <= tol * size)


def inverse(q, tol=DEFAULT_ZERO_DIVISOR_TOL):
    """``conj(q) / (Q1**2 + Q2**2)``; raises :class:`ZeroDivisorError` on the null cone."""
    q = Bicomplex.coerce(q)
    s, v = _values(q.sc), _values(q.vec)
    size = np.abs(s) ** 2 + np.abs(v) ** 2
    if np.any(size == 0):
        raise ZeroDivisorError("bicomplex zero has no inverse")
    if np.any(np.abs(s * s + v * v) <= tol * size):
        raise ZeroDivisorError("bicomplex zero divisor has no inverse")
    n = q.norm_sq()
    if isinstance(n, Jet):
        r = n.reciprocal()
    else:
        r = 1.0 / n
    return Bicomplex(q.sc * r, -q.vec * r)

"""Composite Gauss-Legendre rules on [0, 1] with per-target panel doubling."""

from __future__ import annotations

from functools import lru_cache

import numpy as np
from numpy.polynomial import legendre

from .errors import QuadratureError

DEFAULT_NODES = 16
DEFAULT_RTOL = 1e-11
MAX_PANELS = 2 ** 10


@lru_cache(maxsize=None)
def gauss_legendre(n):
    x, w = legendre.leggauss(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


@lru_cache(maxsize=None)
def cumulative_matrix(n):
    """``S[i, j] = integral from -1 to x_i of the j-th Lagrange basis polynomial``.

    Applied to samples of a smooth function at the Gauss nodes it returns the
    running integral at those same nodes, with the accuracy of degree n-1
    interpolation.
    """
    x, _ = gauss_legendre(n)
    vander = legendre.legvander(x, n - 1)
    integrated = np.empty((n, n))
    for k in range(n):
        c = np.zeros(n)
        c[k] = 1.0
        integrated[:, k] = legendre.legval(x, legendre.legint(c, lbnd=-1))
    S = integrated @ np.linalg.inv(vander)
    S.setflags(write=False)
    return S


def panel_nodes(panels, n=DEFAULT_NODES):
    """Nodes and weights of ``panels`` equal panels on [0, 1]."""
    x, w = gauss_legendre(n)
    left = np.arange(panels)[:, None] / panels
    t = left + (x[None, :] + 1.0) / (2 * panels)
    return t.ravel(), np.tile(w / (2 * panels), panels)


def integrate(values, panels, n=DEFAULT_NODES):
    """Integral over [0, 1] of samples at :func:`panel_nodes` (last axis)."""
    _, w = gauss_legendre(n)
    shaped = values.reshape(values.shape[:-1] + (panels, n))
    acc = shaped[..., 0] * w[0]
    for j in range(1, n):
        acc = acc + shaped[..., j] * w[j]
    total = acc[..., 0]
    for p in range(1, panels):
        total = total + acc[..., p]
    return total / (2 * panels)


def cumulative(values, panels, n=DEFAULT_NODES):
    """Running integrals from 0 to every node, plus the total over [0, 1].

    Sums are accumulated with explicit loops in a fixed order so a target's
    result does not depend on what else is in the batch.
    """
    S = cumulative_matrix(n)
    _, w = gauss_legendre(n)
    shaped = values.reshape(values.shape[:-1] + (panels, n))
    inner = shaped[..., 0:1] * S[:, 0]
    for j in range(1, n):
        inner = inner + shaped[..., j:j + 1] * S[:, j]
    totals = shaped[..., 0] * w[0]
    for j in range(1, n):
        totals = totals + shaped[..., j] * w[j]
    offset = np.zeros(values.shape[:-1], dtype=values.dtype)
    out = np.empty_like(shaped)
    for p in range(panels):
        out[..., p, :] = offset[..., None] + inner[..., p, :]
        offset = offset + totals[..., p]
    scale = 1.0 / (2 * panels)
    return out.reshape(values.shape) * scale, offset * scale


def converged(new, old, rtol, scale):
    """Per-target convergence of arrays shaped (..., T) with magnitude ``scale`` (T,)."""
    diff = np.abs(new - old)
    mag = np.maximum(np.abs(new), scale)
    ok = diff <= rtol * mag
    return ok.reshape(-1, ok.shape[-1]).all(axis=0)


def adaptive(compute, ntargets, rtol=DEFAULT_RTOL, max_panels=MAX_PANELS, what="integral"):
    """Double panels per target until ``compute`` stops changing.

    ``compute(idx, panels)`` evaluates the quantity for the targets ``idx``
    and returns ``(result, scale)`` where ``result`` has targets on the last
    axis and ``scale`` is a per-target magnitude used as an absolute floor.
    Returns the converged result for all targets.
    """
    idx = np.arange(ntargets)
    prev, _ = compute(idx, 1)
    out = np.empty_like(prev)
    panels = 2
    while True:
        cur, scale = compute(idx, panels)
        ok = converged(cur, prev, rtol, scale)
        out[..., idx[ok]] = cur[..., ok]
        idx = idx[~ok]
        if idx.size == 0:
            return out
        if panels >= max_panels:
            raise QuadratureError(f"{what} did not converge with {panels} panels")
        prev = cur[..., ~ok]
        panels *= 2

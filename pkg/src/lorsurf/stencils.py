"""Finite-difference stencils and cumulative quadrature on rectangular grids.

Grids may be non-uniform; every routine takes the coordinate array.  All
derivatives are second-order accurate in the interior (central stencils)
and second-order one-sided at the borders, matching the trapezoid error of
the running integrals.
"""

from __future__ import annotations

import numpy as np
from scipy.integrate import cumulative_simpson, cumulative_trapezoid

from .errors import StencilError

__all__ = [
    "check_grid",
    "gradient",
    "second_derivative",
    "cross_derivative",
    "cumtrapz_from",
    "cumsimpson_from",
]


def check_grid(t, name="grid", min_len=2):
    """Validate a strictly increasing 1-D coordinate array."""
    t = np.asarray(t, dtype=float)
    if t.ndim != 1 or t.size < min_len:
        raise StencilError(f"{name} needs at least {min_len} nodes, got shape {t.shape}")
    if not np.all(np.isfinite(t)):
        raise StencilError(f"{name} contains non-finite values")
    if np.any(np.diff(t) <= 0):
        raise StencilError(f"{name} must be strictly increasing")
    return t


def _diffs(f, t, axis):
    f = np.asarray(f, dtype=float)
    t = np.asarray(t, dtype=float)
    n = f.shape[axis]
    if n < 3:
        raise StencilError("derivative stencils need at least 3 nodes along the axis")
    fm = np.moveaxis(f, axis, 0)
    tt = t.reshape((n,) + (1,) * (fm.ndim - 1))
    return fm, np.diff(fm, axis=0), np.diff(tt, axis=0)


def gradient(f, t, axis):
    """First derivative along `axis`: central interior, 3-point one-sided edges.

    Written in terms of node differences so constant fields differentiate
    to exactly zero; second-order accurate everywhere, on non-uniform grids
    included.
    """
    fm, d, h = _diffs(f, t, axis)
    out = np.empty_like(fm)
    hm, hp = h[:-1], h[1:]
    dm, dp = d[:-1], d[1:]
    out[1:-1] = (hm * hm * dp + hp * hp * dm) / (hm * hp * (hm + hp))
    curv_l = 2.0 * (h[0] * d[1] - h[1] * d[0]) / (h[0] * h[1] * (h[0] + h[1]))
    out[0] = d[0] / h[0] - 0.5 * h[0] * curv_l
    curv_r = 2.0 * (h[-2] * d[-1] - h[-1] * d[-2]) / (h[-2] * h[-1] * (h[-2] + h[-1]))
    out[-1] = d[-1] / h[-1] + 0.5 * h[-1] * curv_r
    return np.moveaxis(out, 0, axis)


def second_derivative(f, t, axis):
    """Second derivative along `axis` from quadratic fits of node triples.

    Interior nodes use the centered triple; the first and last node reuse
    the curvature of the adjacent triple (exact for quadratics, first order
    on non-uniform borders).  Constant fields map to exactly zero.
    """
    fm, d, h = _diffs(f, t, axis)
    out = np.empty_like(fm)
    hm, hp = h[:-1], h[1:]
    dm, dp = d[:-1], d[1:]
    out[1:-1] = 2.0 * (hm * dp - hp * dm) / (hm * hp * (hm + hp))
    out[0] = out[1]
    out[-1] = out[-2]
    return np.moveaxis(out, 0, axis)


def cross_derivative(F, u, v):
    """Mixed partial F_uv by the symmetric 4-point stencil, interior only.

    F has shape (nu, nv) with axis 0 <-> u.  Returns an (nu-2, nv-2) array
    for the interior nodes; border values are not defined.
    """
    F = np.asarray(F, dtype=float)
    if F.shape[0] < 3 or F.shape[1] < 3:
        raise StencilError("cross_derivative needs a grid of at least 3x3 nodes")
    du = (u[2:] - u[:-2])[:, None]
    dv = (v[2:] - v[:-2])[None, :]
    num = F[2:, 2:] - F[2:, :-2] - F[:-2, 2:] + F[:-2, :-2]
    return num / (du * dv)


def cumtrapz_from(f, t, i0, axis=0):
    """Signed running trapezoid integral along `axis`, anchored at node i0.

    Returns G with G[..., i, ...] = integral from t[i0] to t[i]; entries for
    i < i0 are negative accumulations, G at i0 is exactly zero.
    """
    f = np.asarray(f, dtype=float)
    g = cumulative_trapezoid(f, x=t, axis=axis, initial=0.0)
    anchor = np.take(g, [i0], axis=axis)
    return g - anchor


def cumsimpson_from(f, t, i0):
    """Signed 1-D cumulative Simpson integral anchored at node i0.

    Order 4 on smooth integrands; used for the canonical coordinate maps.
    Falls back to the trapezoid rule on 2-point grids.
    """
    f = np.asarray(f, dtype=float)
    t = np.asarray(t, dtype=float)
    if f.size != t.size:
        raise StencilError("integrand and grid lengths differ")
    if t.size < 2:
        raise StencilError("quadrature needs at least 2 nodes")
    if t.size == 2:
        g = cumulative_trapezoid(f, x=t, initial=0.0)
    else:
        g = cumulative_simpson(f, x=t, initial=0.0)
    return g - g[i0]

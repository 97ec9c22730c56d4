"""Canonical null coordinates: construction, resampling and verification.

For a surface of general type the reparametrizations

    tu(u) = tu0 + integral of sqrt(|L(s, v0)|) from u0 to u,
    tv(v) = tv0 + integral of sqrt(|N(u0, s)|) from v0 to v

turn the coordinates into canonical ones (L = eps1 on the line v = v0 and
N = eps2 on u = u0).  The maps are built by cumulative Simpson quadrature
and inverted with cubic Hermite interpolation using the exact stored
slopes, which keeps the inversion at quadrature accuracy while preserving
monotonicity.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicHermiteSpline, CubicSpline, PchipInterpolator

from .chart import Chart, grid_index
from .errors import ChartError, MapRangeError, NotGeneralTypeError
from .stencils import check_grid, cumsimpson_from
from .surfaces import SurfaceJet2, SurfaceProvider, fundamental_forms

__all__ = [
    "MonotoneMap",
    "canonical_maps",
    "canonical_maps_from_lines",
    "resample_to_canonical",
    "CanonicalReport",
    "verify_canonical",
    "canonical_gauge_transform",
    "reparametrize_provider",
]


@dataclass
class MonotoneMap:
    """Strictly increasing 1-D coordinate change with slopes at the knots.

    knots are source parameter values, values the targets, derivative the
    slope d(target)/d(source) at the knots (all positive).
    """

    knots: np.ndarray
    values: np.ndarray
    derivative: np.ndarray

    def __post_init__(self):
        self.knots = check_grid(self.knots, "map knots")
        self.values = np.asarray(self.values, dtype=float)
        self.derivative = np.asarray(self.derivative, dtype=float)
        if np.any(np.diff(self.values) <= 0.0):
            raise ChartError("map values must be strictly increasing")
        if np.any(self.derivative <= 0.0):
            raise ChartError("map derivative must be positive at every knot")
        self._forward = _monotone_hermite(self.knots, self.values, self.derivative)
        self._inverse = _monotone_hermite(self.values, self.knots, 1.0 / self.derivative)
        self._slope = CubicSpline(self.knots, self.derivative)

    @property
    def range(self):
        return float(self.values[0]), float(self.values[-1])

    def __call__(self, u):
        return self._forward(u)

    def inverse(self, t):
        """Pull target values back to source parameters (range-checked)."""
        t = np.asarray(t, dtype=float)
        lo, hi = self.range
        span = hi - lo
        if np.any(t < lo - 1e-12 * span) or np.any(t > hi + 1e-12 * span):
            raise MapRangeError(
                f"target values outside map range [{lo!r}, {hi!r}]")
        return self._inverse(np.clip(t, lo, hi))

    def slope_at(self, u):
        """d(target)/d(source) interpolated at source values."""
        return self._slope(u)


def _monotone_hermite(x, y, d):
    """Cubic Hermite interpolant, falling back to PCHIP if the given slopes
    could break monotonicity (Fritsch-Carlson bound d <= 3 * secant)."""
    secant = np.diff(y) / np.diff(x)
    ok = np.all(d[:-1] <= 3.0 * secant) and np.all(d[1:] <= 3.0 * secant)
    if ok:
        return CubicHermiteSpline(x, y, d)
    return PchipInterpolator(x, y)


def _line_tol(line):
    return 1e-10 * (1.0 + np.max(np.abs(line)))


def _check_general_type(line, grid, i0, label):
    tol = _line_tol(line)
    small = np.abs(line) <= tol
    if np.any(small):
        k = int(np.argwhere(small)[0][0])
        raise NotGeneralTypeError(
            f"{label} vanishes on the base line at parameter {float(grid[k])!r} (node {k})")
    s0 = np.sign(line[i0])
    flips = np.sign(line) != s0
    if np.any(flips):
        k = int(np.argwhere(flips)[0][0])
        raise NotGeneralTypeError(
            f"{label} changes sign on the base line at parameter {float(grid[k])!r} (node {k}); "
            "the surface changes kind there")


def canonical_maps_from_lines(u_grid, L_line, v_grid, N_line, u0, v0,
                              tilde_u0=0.0, tilde_v0=0.0):
    """Canonical coordinate maps from sampled base-line coefficients."""
    u_grid = check_grid(np.asarray(u_grid, dtype=float), "u_grid")
    v_grid = check_grid(np.asarray(v_grid, dtype=float), "v_grid")
    L_line = np.asarray(L_line, dtype=float)
    N_line = np.asarray(N_line, dtype=float)
    i0 = grid_index(u_grid, u0, "u_grid")
    j0 = grid_index(v_grid, v0, "v_grid")
    _check_general_type(L_line, u_grid, i0, "L")
    _check_general_type(N_line, v_grid, j0, "N")
    du = np.sqrt(np.abs(L_line))
    dv = np.sqrt(np.abs(N_line))
    umap = MonotoneMap(knots=u_grid, values=tilde_u0 + cumsimpson_from(du, u_grid, i0),
                       derivative=du)
    vmap = MonotoneMap(knots=v_grid, values=tilde_v0 + cumsimpson_from(dv, v_grid, j0),
                       derivative=dv)
    return umap, vmap


def canonical_maps(provider, u0, v0, u_grid, v_grid, tilde_u0=0.0, tilde_v0=0.0):
    """Canonical coordinate maps for a provider, sampled on the given grids.

    Requires |L| > 0 along v = v0 and |N| > 0 along u = u0 (general type);
    errors name the first offending parameter value.
    """
    u_grid = np.asarray(u_grid, dtype=float)
    v_grid = np.asarray(v_grid, dtype=float)
    fd_u = fundamental_forms(provider(u_grid, np.full_like(u_grid, v0)))
    fd_v = fundamental_forms(provider(np.full_like(v_grid, u0), v_grid))
    return canonical_maps_from_lines(u_grid, fd_u.L, v_grid, fd_v.N, u0, v0,
                                     tilde_u0, tilde_v0)


def resample_to_canonical(chart, maps, canonical_u_grid, canonical_v_grid,
                          tol=1e-6):
    """Pull a chart back through canonical maps onto canonical grids.

    Source fields are evaluated at (u, v) = (umap^-1(tu), vmap^-1(tv)) by
    bicubic interpolation and transformed with u' = du/dtu = 1/sqrt(|L|):
    F -> F u'v', L -> L u'^2, M -> M u'v', N -> N v'^2, while H and K are
    invariant.  The canonical grids must contain the images of the base
    point and lie inside the map ranges.  The result is flagged canonical
    when verify_canonical passes at `tol`.
    """
    for name in ("L", "M", "N"):
        if getattr(chart, name) is None:
            raise ChartError(f"resampling requires the source chart to carry {name}")
    umap, vmap = maps
    cu = check_grid(np.asarray(canonical_u_grid, dtype=float), "canonical_u_grid")
    cv = check_grid(np.asarray(canonical_v_grid, dtype=float), "canonical_v_grid")
    u_src = umap.inverse(cu)
    v_src = vmap.inverse(cv)
    up = 1.0 / umap.slope_at(u_src)   # du/dtu at the pulled-back nodes
    vp = 1.0 / vmap.slope_at(v_src)
    i0 = grid_index(cu, float(umap(chart.u0)), "canonical_u_grid")
    j0 = grid_index(cv, float(vmap(chart.v0)), "canonical_v_grid")

    def pull(name):
        return chart.interpolator(name)(u_src, v_src)

    F = pull("F") * np.outer(up, vp)
    L = pull("L") * (up**2)[:, None]
    M = pull("M") * np.outer(up, vp)
    N = pull("N") * (vp**2)[None, :]
    out = Chart(
        u_grid=cu, v_grid=cv, F=F, H=pull("H"),
        L=L, M=M, N=N, K=pull("K") if chart.K is not None else None,
        u0_index=i0, v0_index=j0,
        eps1=int(np.sign(L[i0, j0])), eps2=int(np.sign(N[i0, j0])),
        metadata=dict(chart.metadata, resampled=True))
    out.validate()
    report = verify_canonical(out, tol=tol)
    out.canonical = report.passed
    out.metadata["canonical_check"] = {
        "max_dev_L": report.max_dev_L, "max_dev_N": report.max_dev_N,
        "tol": tol, "passed": report.passed}
    return out


@dataclass
class CanonicalReport:
    max_dev_L: float
    max_dev_N: float
    passed: bool
    tol: float
    eps1: int
    eps2: int
    base: tuple  # (u0, v0)


def verify_canonical(chart, tol=1e-6):
    """Deviation of L(., v0) from eps1 and N(u0, .) from eps2.

    Canonicity depends on the stored base point; the report names it.
    """
    if chart.L is None or chart.N is None:
        raise ChartError("verify_canonical requires L and N fields")
    dev_L = float(np.max(np.abs(chart.L[:, chart.v0_index] - chart.eps1)))
    dev_N = float(np.max(np.abs(chart.N[chart.u0_index, :] - chart.eps2)))
    return CanonicalReport(
        max_dev_L=dev_L, max_dev_N=dev_N,
        passed=dev_L <= tol and dev_N <= tol, tol=tol,
        eps1=chart.eps1, eps2=chart.eps2, base=(chart.u0, chart.v0))


def canonical_gauge_transform(chart, delta, c1, c2, swap=False, tol=1e-6):
    """Apply the residual gauge freedom u = delta*tu + c1, v = delta*tv + c2.

    With `swap` the parameter numeration is exchanged first, which negates
    L, M, N (and hence H) and swaps the eps signs.  The input must be
    canonical; the output is canonical again with the transformed signs.
    This is an exact index-level operation, no interpolation happens.
    """
    if delta not in (-1, 1):
        raise ChartError("delta must be +1 or -1")
    if not chart.canonical and not verify_canonical(chart, tol=tol).passed:
        raise ChartError("gauge transform requires a canonical chart")

    u_grid, v_grid = chart.u_grid, chart.v_grid
    F, H, L, M, N, K = chart.F, chart.H, chart.L, chart.M, chart.N, chart.K
    i0, j0 = chart.u0_index, chart.v0_index
    eps1, eps2 = chart.eps1, chart.eps2
    if swap:
        u_grid, v_grid = v_grid, u_grid
        i0, j0 = j0, i0
        F, H = F.T, -H.T
        L, M, N = -N.T, -M.T, -L.T
        K = None if K is None else K.T
        eps1, eps2 = -eps2, -eps1

    def axis_map(grid, index, c):
        # tu = delta * (u - c) is increasing for delta = 1, reversed otherwise
        new = delta * (grid - c)
        if delta == 1:
            return new.copy(), index, slice(None)
        return new[::-1].copy(), grid.size - 1 - index, slice(None, None, -1)

    new_u, new_i0, su = axis_map(u_grid, i0, c1)
    new_v, new_j0, sv = axis_map(v_grid, j0, c2)

    def flip(arr):
        return None if arr is None else arr[su, :][:, sv].copy()

    out = Chart(
        u_grid=new_u, v_grid=new_v, F=flip(F), H=flip(H),
        L=flip(L), M=flip(M), N=flip(N), K=flip(K),
        u0_index=new_i0, v0_index=new_j0, eps1=eps1, eps2=eps2,
        canonical=True,
        metadata=dict(chart.metadata, gauge={"delta": delta, "c1": c1, "c2": c2, "swap": swap}))
    return out.validate()


def reparametrize_provider(provider, umap, vmap):
    """Provider of the same surface in the target coordinates of two maps.

    Jets follow the chain rule with u(tu), u'(tu), u''(tu) taken from the
    inverse interpolants, so second derivatives inherit the interpolation
    error of the maps.
    """
    inv_u = umap._inverse
    inv_v = vmap._inverse
    inv_u1, inv_u2 = inv_u.derivative(1), inv_u.derivative(2)
    inv_v1, inv_v2 = inv_v.derivative(1), inv_v.derivative(2)

    def jet(tu, tv):
        u, v = inv_u(tu), inv_v(tv)
        up, vp = inv_u1(tu), inv_v1(tv)
        upp, vpp = inv_u2(tu), inv_v2(tv)
        j = provider(u, v)
        return SurfaceJet2(
            x=j.x,
            x_u=j.x_u * up[..., None],
            x_v=j.x_v * vp[..., None],
            x_uu=j.x_uu * (up**2)[..., None] + j.x_u * upp[..., None],
            x_uv=j.x_uv * (up * vp)[..., None],
            x_vv=j.x_vv * (vp**2)[..., None] + j.x_v * vpp[..., None])

    (ulo, uhi), (vlo, vhi) = umap.range, vmap.range
    return SurfaceProvider(jet=jet, domain=(ulo, uhi, vlo, vhi))

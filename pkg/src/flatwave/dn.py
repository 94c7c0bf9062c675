"""Dirichlet-Neumann operator via the strip fixed-point formulation.

The harmonic gradient on the strip satisfies

    grad phi = (explicit linear profile of psi)
             + (integral kernels applied to g1, g2, g3)
             + boundary term [0, g1(z)],

where g1, g2, g3 are pointwise-linear in grad phi with coefficients that are
rational in h, so a Picard iteration converges for small interface height.
The integral kernels are Fourier multipliers in x for every node pair
(z, s); only the combinations used here are regular at xi = 0, and every
exponential below is arranged with a nonpositive exponent so nothing blows
up at large frequency.

The expansion of G(h)psi in powers of the surface height is exposed as
:func:`linear_part` / :func:`quadratic_part` / :func:`cubic_part`, with
:func:`cubic_remainder` solving the dedicated fixed point for the cubic and
higher tail.  :func:`dn_series` is an independent surface-only evaluation
(Taylor expansion of the boundary trace) used as the fast engine for time
stepping.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .spectral import Grid
from .strip import StripGrid, barycentric_matrix, clenshaw_curtis

__all__ = [
    "StripField",
    "GTriple",
    "SmallnessError",
    "FixedPointError",
    "linear_part",
    "surface_factors",
    "g_triple",
    "apply_kernels",
    "fixed_point_solve",
    "dn_trace",
    "dn_compute",
    "quadratic_part",
    "quadratic_strip",
    "cubic_remainder",
    "cubic_part",
    "surface_b_v",
    "dn_series",
    "bilinear_apply_direct",
    "channel_symbols",
    "smallness_norm",
]


class SmallnessError(ValueError):
    """Interface height too large for the contraction regime."""


class FixedPointError(RuntimeError):
    def __init__(self, message, increments):
        super().__init__(message)
        self.increments = list(increments)


@dataclass
class StripField:
    """grad_x phi (two components) and d_z phi on strip nodes, (nz, n, n) each."""

    gx1: np.ndarray
    gx2: np.ndarray
    gz: np.ndarray

    def __add__(self, o):
        return StripField(self.gx1 + o.gx1, self.gx2 + o.gx2, self.gz + o.gz)

    def __sub__(self, o):
        return StripField(self.gx1 - o.gx1, self.gx2 - o.gx2, self.gz - o.gz)

    def __mul__(self, c):
        return StripField(c * self.gx1, c * self.gx2, c * self.gz)

    __rmul__ = __mul__

    def copy(self):
        return StripField(self.gx1.copy(), self.gx2.copy(), self.gz.copy())

    @staticmethod
    def zeros(strip: StripGrid):
        shape = (strip.nz, strip.base.n, strip.base.n)
        return StripField(np.zeros(shape), np.zeros(shape), np.zeros(shape))


@dataclass
class GTriple:
    """The strip forcing decomposition: two scalars and one vector field."""

    g1: np.ndarray
    g2: np.ndarray
    g3x: np.ndarray
    g3y: np.ndarray

    def __add__(self, o):
        return GTriple(self.g1 + o.g1, self.g2 + o.g2, self.g3x + o.g3x, self.g3y + o.g3y)


# --------------------------------------------------------------------------
# kernel symbols (radial factors), stable for all a >= 0
# --------------------------------------------------------------------------


def _chan_a_x(zv: float, sv: float, a: np.ndarray) -> np.ndarray:
    """Combined first-component radial factor on the (g2 + div g3) channel.

    This is the full [K1 - K2 - K3] combination divided by 2a; the raw pieces
    have direction-dependent xi -> 0 limits, only the combination is regular
    (it tends to max(z, s)).  Fourth-order series below a < 1e-3.
    """
    mn, mx = min(zv, sv), max(zv, sv)
    den = 1.0 + np.exp(-2.0 * a)
    F = (np.exp((zv + sv) * a) - np.exp(-abs(zv - sv) * a)) - (
        np.exp((zv + sv - 2.0) * a)
        - np.exp((zv - sv - 2.0) * a)
        - np.exp((sv - zv - 2.0) * a)
        + np.exp(-(zv + sv + 2.0) * a)
    ) / den
    out = np.empty_like(a)
    big = a >= 1e-3
    out[big] = F[big] / (2.0 * a[big])
    ab = a[~big]
    out[~big] = mx * (
        120.0
        + 20.0 * ab**2 * (3.0 * mn**2 + 6.0 * mn + mx**2)
        + ab**4 * (5.0 * mn**4 + 20.0 * mn**3 + 10.0 * mn**2 * mx**2
                   + 20.0 * mn * mx**2 - 40.0 * mn + mx**4)
    ) / 120.0
    return out


def _chan_a_z(zv: float, sv: float, a: np.ndarray, upper: bool) -> np.ndarray:
    """Second component of [K1 - K2 - K3]; one-sided branch at s = z."""
    den = 1.0 + np.exp(-2.0 * a)
    cosh_ratio = (np.exp((zv - 1.0) * a) + np.exp(-(zv + 1.0) * a)) / den
    sinh_s = 0.5 * (np.exp((sv - 1.0) * a) - np.exp(-(sv + 1.0) * a))  # sinh(sa) e^{-a}
    sgn = 1.0 if upper else -1.0
    return -cosh_ratio * sinh_s + 0.5 * (
        np.exp((zv + sv) * a) - sgn * np.exp(-abs(zv - sv) * a)
    )


def _chan_b_x(zv: float, sv: float, a: np.ndarray, upper: bool) -> np.ndarray:
    """First-component radial factor on the g1 channel (to be multiplied by i xi)."""
    den = 1.0 + np.exp(-2.0 * a)
    shch = (
        np.exp((zv + sv - 2.0) * a)
        + np.exp((zv - sv - 2.0) * a)
        - np.exp((sv - zv - 2.0) * a)
        - np.exp(-(zv + sv + 2.0) * a)
    ) / (2.0 * den)
    sgn_zs = -1.0 if upper else 1.0
    return 0.5 * np.exp(-abs(zv - sv) * a) * sgn_zs - 0.5 * np.exp((zv + sv) * a) + shch


def _chan_b_z(zv: float, sv: float, a: np.ndarray) -> np.ndarray:
    """Second component on the g1 channel (continuous across s = z)."""
    den = 1.0 + np.exp(-2.0 * a)
    chch = (
        np.exp((zv + sv - 2.0) * a)
        + np.exp((zv - sv - 2.0) * a)
        + np.exp((sv - zv - 2.0) * a)
        + np.exp(-(zv + sv + 2.0) * a)
    ) / (2.0 * den)
    return -0.5 * a * np.exp(-abs(zv - sv) * a) + a * chch - 0.5 * a * np.exp((zv + sv) * a)


def channel_symbols(zv: float, sv: float, a) -> dict:
    """Combined kernel symbols at node pair (z, s) and radial frequency a.

    Returns the four radial factors; the two x-channels are defined so the
    full symbol is i*xi times the returned value.
    """
    a = np.atleast_1d(np.asarray(a, dtype=float))
    upper = sv >= zv
    return {
        "a_x": _chan_a_x(zv, sv, a),
        "a_z": _chan_a_z(zv, sv, a, upper),
        "b_x": _chan_b_x(zv, sv, a, upper),
        "b_z": _chan_b_z(zv, sv, a),
    }


# --------------------------------------------------------------------------
# kernel tables: per-mode nz x nz matrices from split Clenshaw-Curtis
# --------------------------------------------------------------------------


class _KernelTables(NamedTuple):
    auniq: np.ndarray
    order: np.ndarray
    bounds: np.ndarray
    ma_x: np.ndarray
    ma_z: np.ndarray
    mb_x: np.ndarray
    mb_z: np.ndarray


_TABLE_CACHE: dict = {}


def _kernel_tables(strip: StripGrid, nq: int | None = None) -> _KernelTables:
    """Integration matrices M[a][j, m]: s-integral of kernel against the
    Chebyshev interpolant, split at s = z because the kernels are only
    piecewise smooth there."""
    nq = nq or strip.nz + 4
    key = strip.key() + (nq,)
    if key in _TABLE_CACHE:
        return _TABLE_CACHE[key]
    g = strip.base
    ka = np.round(g.kabs, 9)
    auniq, inv = np.unique(ka, return_inverse=True)
    order = np.argsort(inv.ravel(), kind="stable")
    counts = np.bincount(inv.ravel(), minlength=len(auniq))
    bounds = np.concatenate([[0], np.cumsum(counts)])
    na, nz = len(auniq), strip.nz
    mats = {name: np.zeros((na, nz, nz)) for name in ("a_x", "a_z", "b_x", "b_z")}
    z = strip.z
    for j, zj in enumerate(z):
        for lo, hi, upper in ((-1.0, zj, False), (zj, 0.0, True)):
            if hi - lo < 1e-14:
                continue
            sq, wq = clenshaw_curtis(lo, hi, nq)
            interp = barycentric_matrix(z, sq)
            for qi in range(nq):
                sv, wv = float(sq[qi]), float(wq[qi])
                mats["a_x"][:, j, :] += wv * np.outer(_chan_a_x(zj, sv, auniq), interp[qi])
                mats["a_z"][:, j, :] += wv * np.outer(_chan_a_z(zj, sv, auniq, upper), interp[qi])
                mats["b_x"][:, j, :] += wv * np.outer(_chan_b_x(zj, sv, auniq, upper), interp[qi])
                mats["b_z"][:, j, :] += wv * np.outer(_chan_b_z(zj, sv, auniq), interp[qi])
    tables = _KernelTables(auniq, order, bounds, mats["a_x"], mats["a_z"], mats["b_x"], mats["b_z"])
    if len(_TABLE_CACHE) > 3:
        _TABLE_CACHE.pop(next(iter(_TABLE_CACHE)))
    _TABLE_CACHE[key] = tables
    return tables


def _apply_tables(tables: _KernelTables, M: np.ndarray, spec: np.ndarray) -> np.ndarray:
    """Apply the per-mode vertical matrices to an (nz, n, n) spectrum."""
    nz = spec.shape[0]
    flat = spec.reshape(nz, -1)
    out = np.empty_like(flat)
    for gidx in range(len(tables.auniq)):
        cols = tables.order[tables.bounds[gidx]:tables.bounds[gidx + 1]]
        if len(cols):
            out[:, cols] = M[gidx] @ flat[:, cols]
    return out.reshape(spec.shape)


# --------------------------------------------------------------------------
# the three building blocks of the fixed point
# --------------------------------------------------------------------------


def linear_part(psi: np.ndarray, strip: StripGrid) -> StripField:
    """Flat-interface harmonic gradient of psi.

    Horizontal: cosh((z+1)|xi|)/cosh|xi| grad psi; vertical:
    sinh((z+1)|xi|)/cosh|xi| |xi| psi.  At z = 0 the vertical component is
    |grad| tanh|grad| psi; at z = -1 it vanishes identically.
    """
    g = strip.base
    F = g.fft(psi)
    a = g.kabs
    den = 1.0 + np.exp(-2.0 * a)
    nz, n = strip.nz, g.n
    gx1 = np.empty((nz, n, n))
    gx2 = np.empty((nz, n, n))
    gz = np.empty((nz, n, n))
    for i, zv in enumerate(strip.z):
        ez = np.exp(zv * a)
        e2 = np.exp(-2.0 * (zv + 1.0) * a)
        ch = ez * (1.0 + e2) / den
        sh = ez * (1.0 - e2) / den
        gx1[i] = g.ifft(1j * g.kx * ch * F)
        gx2[i] = g.ifft(1j * g.ky * ch * F)
        gz[i] = g.ifft(a * sh * F)
    return StripField(gx1, gx2, gz)


class SurfaceFactors(NamedTuple):
    """Rational-in-h coefficient fields multiplying the harmonic gradient."""

    f1: np.ndarray
    f2: np.ndarray
    f3x: np.ndarray
    f3y: np.ndarray


def surface_factors(grid: Grid, h: np.ndarray) -> SurfaceFactors:
    """f1 = (2h + h^2)/(1+h)^2, f2 = |grad h|^2/(1+h)^2, f3 = grad h/(1+h)."""
    if np.min(1.0 + h) <= 0.5:
        raise SmallnessError(
            f"1 + h reaches {np.min(1.0 + h):.4f}; the strip transform degenerates"
        )
    hx, hy = grid.grad(h)
    one = 1.0 + h
    return SurfaceFactors(
        (2.0 * h + h**2) / one**2,
        (hx**2 + hy**2) / one**2,
        hx / one,
        hy / one,
    )


def _g_from_factors(strip: StripGrid, fac: SurfaceFactors, grad: StripField) -> GTriple:
    """Assemble (g1, g2, g3) for arbitrary coefficient fields and gradient."""
    g = strip.base
    zz = strip.z[:, None, None]
    m = lambda c, f: g.dealias(c[None] * f)
    dot = m(fac.f3x, grad.gx1) + m(fac.f3y, grad.gx2)
    f1gz = m(fac.f1, grad.gz)
    f2gz = m(fac.f2, grad.gz)
    f3gz_x = m(fac.f3x, grad.gz)
    f3gz_y = m(fac.f3y, grad.gz)
    g1 = f1gz - (zz + 1.0) ** 2 * f2gz + (zz + 1.0) * dot
    g2 = (zz + 1.0) * f2gz - dot
    return GTriple(g1, g2, (zz + 1.0) * f3gz_x, (zz + 1.0) * f3gz_y)


def g_triple(h: np.ndarray, grad: StripField, strip: StripGrid) -> GTriple:
    """Strip forcing fields; linear in grad, vanishing with h, g1(-1) = 0."""
    return _g_from_factors(strip, surface_factors(strip.base, h), grad)


def apply_kernels(g: GTriple, strip: StripGrid) -> StripField:
    """Integral-kernel contribution to the harmonic gradient.

    The (g2 + div g3) channel goes through the combined regular-at-zero
    kernel; the g1 channel through its own combination plus the boundary
    term [0, g1(z)].
    """
    gr = strip.base
    tables = _kernel_tables(strip)
    W = (
        np.fft.fft2(g.g2, axes=(1, 2))
        + 1j * gr.kx[None] * np.fft.fft2(g.g3x, axes=(1, 2))
        + 1j * gr.ky[None] * np.fft.fft2(g.g3y, axes=(1, 2))
    )
    G1 = np.fft.fft2(g.g1, axes=(1, 2))
    U = _apply_tables(tables, tables.ma_x, W)
    V = _apply_tables(tables, tables.mb_x, G1)
    gx1 = np.fft.ifft2(1j * gr.kx[None] * (U + V), axes=(1, 2)).real
    gx2 = np.fft.ifft2(1j * gr.ky[None] * (U + V), axes=(1, 2)).real
    gz = (
        np.fft.ifft2(_apply_tables(tables, tables.ma_z, W), axes=(1, 2)).real
        + np.fft.ifft2(_apply_tables(tables, tables.mb_z, G1), axes=(1, 2)).real
        + g.g1
    )
    return StripField(gx1, gx2, gz)


# --------------------------------------------------------------------------
# fixed point and traces
# --------------------------------------------------------------------------


def smallness_norm(grid: Grid, h: np.ndarray) -> float:
    from .spectral import norm_wtilde

    return norm_wtilde(grid, h, 1.0)


def _sup_l2(strip: StripGrid, f: StripField) -> float:
    g = strip.base
    scale = (g.L / g.n) ** 2
    worst = 0.0
    for comp in (f.gx1, f.gx2, f.gz):
        vals = np.sqrt(np.sum(comp**2, axis=(1, 2)) * scale)
        worst = max(worst, float(vals.max()))
    return worst


def fixed_point_solve(
    h: np.ndarray,
    psi: np.ndarray,
    strip: StripGrid,
    tol: float = 1e-10,
    max_iter: int = 50,
    smallness: float = 0.3,
) -> tuple[StripField, list]:
    """Picard iteration for the harmonic gradient; returns (grad, increments).

    Refuses to run outside the contraction regime (smallness measured in the
    first-order L-infinity-type norm of h).  A flat interface converges in
    exactly one iteration.
    """
    g = strip.base
    sm = smallness_norm(g, h)
    if sm > smallness:
        raise SmallnessError(
            f"height norm {sm:.4f} exceeds the contraction threshold {smallness}"
        )
    fac = surface_factors(g, h)
    lin = linear_part(psi, strip)
    grad = lin.copy()
    increments: list = []
    for _ in range(max_iter):
        nxt = lin + apply_kernels(_g_from_factors(strip, fac, grad), strip)
        inc = _sup_l2(strip, nxt - grad)
        grad = nxt
        increments.append(inc)
        if inc < tol:
            return grad, increments
    raise FixedPointError(
        f"no convergence to {tol} within {max_iter} iterations", increments
    )


def dn_trace(grid: Grid, h: np.ndarray, psi: np.ndarray, grad: StripField) -> np.ndarray:
    """Surface flux (1+|grad h|^2)/(1+h) d_z phi|_0 - grad psi . grad h."""
    hx, hy = grid.grad(h)
    px, py = grid.grad(psi)
    pref = (1.0 + hx**2 + hy**2) / (1.0 + h)
    return grid.dealias(pref * grad.gz[0]) - grid.dealias(px * hx + py * hy)


def dn_compute(
    h: np.ndarray,
    psi: np.ndarray,
    strip: StripGrid,
    tol: float = 1e-10,
    max_iter: int = 50,
    smallness: float = 0.3,
) -> np.ndarray:
    """G(h) psi through the fixed point; mean-zero up to solver tolerance."""
    grad, _ = fixed_point_solve(h, psi, strip, tol, max_iter, smallness)
    return dn_trace(strip.base, h, psi, grad)


# --------------------------------------------------------------------------
# expansion orders in the surface height
# --------------------------------------------------------------------------


def quadratic_part(grid: Grid, h: np.ndarray, psi: np.ndarray) -> np.ndarray:
    """Exact quadratic term: -div(h grad psi) - L2(h L2 psi), L2 = |grad|tanh|grad|."""
    lam2 = grid.kabs * np.tanh(grid.kabs)
    px, py = grid.grad(psi)
    l2psi = grid.ifft(lam2 * grid.fft(psi))
    term1 = -grid.div(grid.mul(h, px), grid.mul(h, py))
    term2 = -grid.ifft(lam2 * grid.fft(grid.mul(h, l2psi)))
    return term1 + term2


def _order_factors(grid: Grid, h: np.ndarray, order: int) -> SurfaceFactors:
    """Exact order-1 or order-2 pieces of the surface factors."""
    hx, hy = grid.grad(h)
    if order == 1:
        z = np.zeros_like(h)
        return SurfaceFactors(2.0 * h, z, hx, hy)
    if order == 2:
        return SurfaceFactors(
            -3.0 * grid.mul(h, h),
            grid.dealias(hx**2 + hy**2),
            -grid.mul(h, hx),
            -grid.mul(h, hy),
        )
    raise ValueError(order)


def quadratic_strip(h: np.ndarray, psi: np.ndarray, strip: StripGrid) -> StripField:
    """Exactly-quadratic part of the harmonic gradient (one kernel pass)."""
    lin = linear_part(psi, strip)
    fac1 = _order_factors(strip.base, h, 1)
    return apply_kernels(_g_from_factors(strip, fac1, lin), strip)


def cubic_remainder(
    h: np.ndarray,
    psi: np.ndarray,
    strip: StripGrid,
    tol: float = 1e-10,
    max_iter: int = 50,
) -> tuple[StripField, np.ndarray, list]:
    """Cubic-and-higher tail of the gradient and the exactly-cubic trace of G.

    Returns (tail, cubic_trace, increments): `tail` solves the dedicated
    fixed point for the third-and-higher orders, `cubic_trace` is the exact
    third-order term of G(h)psi used by the expansion-order ladder.
    """
    g = strip.base
    fac = surface_factors(g, h)
    fac1 = _order_factors(g, h, 1)
    fac2 = _order_factors(g, h, 2)
    # >=2 pieces of the factor fields (closed forms)
    ge2 = SurfaceFactors(
        g.mul(h, h) - g.dealias((2.0 * h + h * h) * fac.f1),
        fac.f2,
        -g.mul(h, fac.f3x),
        -g.mul(h, fac.f3y),
    )
    lin = linear_part(psi, strip)
    quad = quadratic_strip(h, psi, strip)
    # inhomogeneous part: (>=2 factors) x linear grad + (full factors) x quadratic grad
    inhom = _g_from_factors(strip, ge2, lin) + _g_from_factors(strip, fac, quad)
    tail = StripField.zeros(strip)
    increments: list = []
    for _ in range(max_iter):
        rhs = _g_from_factors(strip, fac, tail) + inhom
        nxt = apply_kernels(rhs, strip)
        inc = _sup_l2(strip, nxt - tail)
        tail = nxt
        increments.append(inc)
        if inc < tol:
            break
    else:
        raise FixedPointError(
            f"cubic tail: no convergence to {tol} within {max_iter} iterations",
            increments,
        )
    # exactly-cubic gradient: order-1 factors on quadratic grad + order-2 on linear
    cubic_g = _g_from_factors(strip, fac1, quad) + _g_from_factors(strip, fac2, lin)
    cubic_grad = apply_kernels(cubic_g, strip)
    # trace prefactor (1+|grad h|^2)/(1+h) = 1 - h + (h^2 + |grad h|^2) + ...
    hx, hy = g.grad(h)
    c2 = g.dealias(h * h + hx**2 + hy**2)
    cubic_trace = (
        cubic_grad.gz[0]
        - g.mul(h, quad.gz[0])
        + g.mul(c2, lin.gz[0])
    )
    return tail, cubic_trace, increments


def cubic_part(h: np.ndarray, psi: np.ndarray, strip: StripGrid) -> np.ndarray:
    """Exactly-cubic term of G(h)psi (see :func:`cubic_remainder`)."""
    _, cubic_trace, _ = cubic_remainder(h, psi, strip, tol=1e-12)
    return cubic_trace


def surface_b_v(
    grid: Grid, h: np.ndarray, psi: np.ndarray, G: np.ndarray
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Vertical and horizontal surface velocities.

    B = (G + grad h . grad psi) / (1 + |grad h|^2),  V = grad psi - B grad h.
    """
    hx, hy = grid.grad(h)
    px, py = grid.grad(psi)
    B = (G + hx * px + hy * py) / (1.0 + hx**2 + hy**2)
    return B, px - B * hx, py - B * hy


# --------------------------------------------------------------------------
# surface-only series evaluation (fast engine for time stepping)
# --------------------------------------------------------------------------


def dn_series(
    grid: Grid,
    h: np.ndarray,
    psi: np.ndarray,
    order: int | None = None,
    rel_tol: float = 1e-16,
    max_order: int = 14,
) -> np.ndarray:
    """G(h) psi by Taylor-expanding the boundary trace around z = 0.

    The flat-strip harmonic extension of a trace f has vertical derivatives
    d_y^m phi|_0 = D_m f with D_m = |xi|^m tanh|xi| (m odd) or |xi|^m
    (m even); matching phi(x, h) = psi order by order gives a recursion for
    the trace, and the flux assembles from the same data.  Adaptive order by
    default: stops when a new order contributes below rel_tol relatively.

    Agrees with the strip fixed point for small height; each order is
    individually mean-free, so mass conservation is inherited.
    """
    a = grid.kabs
    ta = np.tanh(a)
    # radial 2/3 cutoff; see the series engine for the amplification bound
    radial = grid.kabs <= (2.0 / 3.0) * np.pi * grid.n / grid.L

    def dmul(m: int) -> np.ndarray:
        return a**m * ta if m % 2 else a**m

    if order is None:
        # order-j contributions shrink like amp^j; pick the order that reaches
        # rel_tol, capped, and let the adaptive loop stop earlier when it can
        amp = float(np.abs(h).max())
        if amp <= 0.0:
            order = 1
        elif amp >= 0.5:
            order = max_order
        else:
            order = int(np.clip(np.ceil(np.log(rel_tol) / np.log(amp)), 2, max_order))
    hx, hy = grid.grad(h)
    # h^m / m! with dealiasing at every product
    hp = [np.ones_like(h), h]
    for m in range(2, order + 1):
        hp.append(grid.ifft(grid.fft(hp[-1] * h) * grid.dealias_mask * radial) / m)
    fhat = [grid.fft(psi)]
    for j in range(1, order + 1):
        acc = np.zeros_like(fhat[0])
        for m in range(1, j + 1):
            acc += grid.fft(hp[m] * grid.ifft(dmul(m) * fhat[j - m])) * grid.dealias_mask * radial
        fhat.append(-acc)
    full_mask = grid.dealias_mask * radial
    G = np.zeros_like(h)
    ref = None
    for j in range(0, order + 1):
        Gj = np.zeros_like(h)
        for m in range(0, j + 1):
            Gj += hp[m] * grid.ifft(dmul(m + 1) * fhat[j - m])
        for m in range(0, j):
            Fm = dmul(m) * fhat[j - 1 - m]
            Gj -= hx * (hp[m] * grid.ifft(1j * grid.kx * Fm))
            Gj -= hy * (hp[m] * grid.ifft(1j * grid.ky * Fm))
        Gj = grid.ifft(grid.fft(Gj) * full_mask)
        G += Gj
        mag = float(np.abs(Gj).max())
        if ref is None:
            ref = max(mag, 1e-300)
        elif mag < rel_tol * ref:
            break
    # the continuum flux has exactly zero mean; pin the discrete one
    return G - G.mean()


# --------------------------------------------------------------------------
# brute-force bilinear application (test oracle for symbol identities)
# --------------------------------------------------------------------------


def bilinear_apply_direct(grid: Grid, sym, f: np.ndarray, g2: np.ndarray) -> np.ndarray:
    """Apply a bilinear symbol by direct double summation (O(n^4); tests only).

    Output spectrum at xi sums sym(zeta, eta) f^(zeta) g^(eta) over grid
    pairs zeta + eta = xi, with f in the first (zeta) slot.
    """
    n = grid.n
    fh = grid.coeffs(f)
    gh = grid.coeffs(g2)
    modes = np.fft.fftfreq(n, d=1.0 / n).astype(int)
    kvec = 2.0 * np.pi / grid.L * modes
    out = np.zeros((n, n), dtype=complex)
    e1, e2 = grid.kx, grid.ky
    for i in range(n):
        for j in range(n):
            c = fh[i, j]
            if abs(c) < 1e-300:
                continue
            vals = sym(kvec[i], kvec[j], e1, e2) * gh
            out += c * np.roll(np.roll(vals, modes[i], axis=0), modes[j], axis=1)
    return grid.ifft(out * n**2)

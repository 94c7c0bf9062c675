"""Closed-form quadratic interaction symbols of the flat-bottom DN operator.

The four bilinear symbols q11, q12, q21, q22 come from integrating the strip
kernels against the first-order vertical profiles; their sum plus the linear
correction collapses to the compact form

    q~(xi - eta, eta) = xi . eta - |xi||eta| tanh|xi| tanh|eta|,

and checking that cancellation numerically is this module's main job.  All
removable singularities (|xi| = |eta|, |xi| + |eta| -> 0, and the a -> 0 limit
of the weighted exponential integral) are evaluated through series branches;
every exponential is arranged with a nonpositive exponent so the formulas are
usable at large frequencies too.

Convention: in q_ij(zeta, eta) the first argument zeta = xi - eta is the
height-field frequency and eta is the potential's; xi = zeta + eta is the
output frequency.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

__all__ = [
    "BilinearSymbol",
    "weighted_exp_integral",
    "qij",
    "qtilde_closed",
    "qtilde_assembled",
    "depth_comparison",
    "p1",
    "p2",
    "sinfty_estimate",
    "SinftyResolutionError",
]


@dataclass(frozen=True)
class BilinearSymbol:
    """A bilinear Fourier symbol (zeta, eta) -> complex with a display label."""

    eval: Callable[[np.ndarray, np.ndarray, np.ndarray, np.ndarray], np.ndarray]
    label: str = ""

    def __call__(self, z1, z2, e1, e2):
        return self.eval(
            np.asarray(z1, float), np.asarray(z2, float),
            np.asarray(e1, float), np.asarray(e2, float),
        )


def weighted_exp_integral(a):
    """int_{-1}^0 (s+1) e^{(s+1) a} ds = (1 + (a-1) e^a) / a^2, series below |a| < 1e-3."""
    a = np.asarray(a, dtype=float)
    out = np.empty_like(a)
    small = np.abs(a) < 1e-3
    ab = a[~small]
    # a e^a - expm1(a) keeps the cancellation at the eps*|a| level
    out[~small] = (ab * np.exp(ab) - np.expm1(ab)) / ab**2
    asml = a[small]
    out[small] = (
        0.5 + asml / 3.0 + asml**2 / 8.0 + asml**3 / 30.0
        + asml**4 / 144.0 + asml**5 / 840.0
    )
    return out if out.ndim else float(out)


# -- scaled primitives -------------------------------------------------------
# Writing u = |xi| + |eta| and d = |xi| - |eta|, every q_ij is a prefactor
# times brackets in the two functions below, pre-multiplied by e^{-u} so that
# the 1/(cosh|xi| cosh|eta|) factor becomes 1/((1+e^{-2|xi|})(1+e^{-2|eta|})).

_WD_SERIES = np.array(
    [2 / 3, 2 / 3, 2 / 5, 8 / 45, 4 / 63, 2 / 105, 2 / 405, 16 / 14175, 4 / 17325]
)


def _vdiff_plus(u):
    """(e^u - e^{-u})/u * e^{-u} = -expm1(-2u)/u, limit 2 at u = 0."""
    out = np.full_like(u, 2.0)
    nz = u != 0.0
    out[nz] = -np.expm1(-2.0 * u[nz]) / u[nz]
    return out


def _vdiff_minus(x, d):
    """(e^d - e^{-d})/d * e^{-(x+y)} = e^{-2x} expm1(2d)/d, limit 2 e^{-2x}."""
    out = np.full_like(d, 2.0)
    nz = d != 0.0
    out[nz] = np.expm1(2.0 * d[nz]) / d[nz]
    return np.exp(-2.0 * x) * out


def _wdiff_scaled(t):
    """[(t-1)e^t + (t+1)e^{-t}]/t^2 * e^{-t} = [(t-1) + (t+1)e^{-2t}]/t^2.

    Odd-series branch below |t| < 0.05 keeps the subtraction benign.
    """
    out = np.empty_like(t)
    small = np.abs(t) < 0.05
    tb = t[~small]
    out[~small] = ((tb - 1.0) + (tb + 1.0) * np.exp(-2.0 * tb)) / tb**2
    ts = t[small]
    acc = np.zeros_like(ts)
    for i, c in enumerate(_WD_SERIES):
        acc += ((-1.0) ** i) * c * ts ** (i + 1)
    out[small] = acc
    return out


def _wdiff_minus(x, d):
    """[W(d) - W(-d)] e^{-(x+y)} = e^{-2x} [(d-1)e^{2d} + d + 1]/d^2, series near d=0."""
    out = np.empty_like(d)
    small = np.abs(d) < 0.05
    db = d[~small]
    out[~small] = (db * (np.exp(2.0 * db) + 1.0) - np.expm1(2.0 * db)) / db**2
    ds = d[small]
    acc = np.zeros_like(ds)
    for i, c in enumerate(_WD_SERIES):
        acc += c * ds ** (i + 1)
    out[small] = acc
    return np.exp(-2.0 * x) * out


def _geom(z1, z2, e1, e2):
    x = np.hypot(z1 + e1, z2 + e2)  # |xi|, output frequency
    y = np.hypot(e1, e2)            # |eta|
    R = 1.0 / ((1.0 + np.exp(-2.0 * x)) * (1.0 + np.exp(-2.0 * y)))
    return x, y, R


def qij(i: int, j: int, z1, z2, e1, e2):
    """Quadratic symbol q_ij(zeta, eta); arrays broadcast, scalars accepted."""
    z1, z2, e1, e2 = np.broadcast_arrays(
        *(np.asarray(v, dtype=float) for v in (z1, z2, e1, e2))
    )
    x, y, R = _geom(z1, z2, e1, e2)
    u, d = x + y, x - y
    xi1, xi2 = z1 + e1, z2 + e2
    if (i, j) == (1, 1):
        pre = -(xi1 * z1 + xi2 * z2) * y
        br = _wdiff_scaled(u) - _wdiff_minus(x, d)
    elif (i, j) == (1, 2):
        pre = z1 * e1 + z2 * e2
        br = _vdiff_plus(u) + _vdiff_minus(x, d)
    elif (i, j) == (2, 1):
        pre = -2.0 * x * y
        br = _vdiff_plus(u) - _vdiff_minus(x, d)
    elif (i, j) == (2, 2):
        pre = x * (z1 * e1 + z2 * e2)
        br = _wdiff_scaled(u) + _wdiff_minus(x, d)
    else:
        raise ValueError(f"no symbol q_{i}{j}")
    out = pre * R * br
    return out if out.ndim else float(out)


def qtilde_assembled(z1, z2, e1, e2):
    """Sum of the four q_ij plus the |eta| tanh|eta| correction."""
    z1, z2, e1, e2 = np.broadcast_arrays(
        *(np.asarray(v, dtype=float) for v in (z1, z2, e1, e2))
    )
    y = np.hypot(e1, e2)
    out = (
        qij(1, 1, z1, z2, e1, e2)
        + qij(1, 2, z1, z2, e1, e2)
        + qij(2, 1, z1, z2, e1, e2)
        + qij(2, 2, z1, z2, e1, e2)
        + y * np.tanh(y)
    )
    return out if np.ndim(out) else float(out)


def qtilde_closed(z1, z2, e1, e2):
    """xi . eta - |xi||eta| tanh|xi| tanh|eta| with xi = zeta + eta."""
    z1, z2, e1, e2 = np.broadcast_arrays(
        *(np.asarray(v, dtype=float) for v in (z1, z2, e1, e2))
    )
    xi1, xi2 = z1 + e1, z2 + e2
    x, y = np.hypot(xi1, xi2), np.hypot(e1, e2)
    out = xi1 * e1 + xi2 * e2 - x * y * np.tanh(x) * np.tanh(y)
    return out if out.ndim else float(out)


QTILDE = BilinearSymbol(
    lambda z1, z2, e1, e2: qtilde_closed(z1, z2, e1, e2), "qtilde"
)


def depth_comparison(xi, eta):
    """(flat, infinite-depth) quadratic-symbol values at output/input pair (xi, eta).

    Infinite depth has the null structure xi.eta - |xi||eta| = 0 for parallel
    same-direction frequencies; the flat-bottom value stays order one there.
    """
    xi = np.asarray(xi, float)
    eta = np.asarray(eta, float)
    z1, z2 = xi[..., 0] - eta[..., 0], xi[..., 1] - eta[..., 1]
    flat = qtilde_closed(z1, z2, eta[..., 0], eta[..., 1])
    dot = xi[..., 0] * eta[..., 0] + xi[..., 1] * eta[..., 1]
    infinite = dot - np.hypot(xi[..., 0], xi[..., 1]) * np.hypot(eta[..., 0], eta[..., 1])
    return flat, infinite


def p1(z1, z2, e1, e2):
    """Bulk-term symbol part xi.eta - |xi||eta| = -|zeta|^2/2 + (|xi|-|eta|)^2/2."""
    xi1, xi2 = np.asarray(z1, float) + e1, np.asarray(z2, float) + e2
    return -0.5 * (np.asarray(z1, float) ** 2 + np.asarray(z2, float) ** 2) + 0.5 * (
        np.hypot(xi1, xi2) - np.hypot(e1, e2)
    ) ** 2


def p2(z1, z2, e1, e2):
    """Bulk-term symbol part |xi||eta| (1 - tanh|xi| tanh|eta|)."""
    xi1, xi2 = np.asarray(z1, float) + e1, np.asarray(z2, float) + e2
    x, y = np.hypot(xi1, xi2), np.hypot(np.asarray(e1, float), np.asarray(e2, float))
    return x * y * (1.0 - np.tanh(x) * np.tanh(y))


# --------------------------------------------------------------------------
# S-infinity estimation: L^1 norm of the inverse transform of the
# band-localized symbol, computed on a (xi, eta) lattice.
# --------------------------------------------------------------------------


class SinftyResolutionError(ValueError):
    """Raised when the sampling lattice cannot resolve the requested bands."""


def _band(t, k):
    from .spectral import bump

    return bump(t / 2.0**k) - bump(t / 2.0 ** (k - 1))


def sinfty_estimate(
    sym: BilinearSymbol | Callable,
    k: int,
    k1: int,
    k2: int,
    npts: int = 40,
    max_spread: int = 12,
) -> float:
    """Numeric S-infinity norm of sym(zeta, eta) psi_k(xi) psi_k1(zeta) psi_k2(eta).

    The L^1 norm of the inverse Fourier transform is invariant under linear
    changes of the frequency variables, so the band-localized symbol is
    sampled in the coordinate pair that excludes the widest band mismatch:
    each lattice axis is scaled to its own band.  The kernel is formed with a
    4D FFT and its lattice L^1 norm returned; this is an estimate, not a
    certified bound.

    Admissible triples satisfy the frequency triangle inequality, which makes
    the two largest bands comparable; only the configured spread is accepted.
    """
    fn = sym.eval if isinstance(sym, BilinearSymbol) else sym
    bands = {"xi": k, "zeta": k1, "eta": k2}
    if max(bands.values()) - min(bands.values()) > max_spread:
        raise SinftyResolutionError(
            f"band spread {bands} exceeds the resolvable range ({max_spread} octaves)"
        )
    smallest = min(bands, key=bands.get)
    # coordinates: the smallest-band variable plus one large one; the third
    # variable is the linear combination and varies on the large scale.
    if smallest == "zeta":
        va, vb = "zeta", "eta"
    elif smallest == "eta":
        va, vb = "eta", "xi"
    else:
        va, vb = "xi", "eta"
    ka, kb = bands[va], bands[vb]
    n4 = npts
    Ra, Rb = 1.65 * 2.0**ka, 1.65 * 2.0**kb
    axa = -Ra + 2 * Ra * np.arange(n4) / n4
    axb = -Rb + 2 * Rb * np.arange(n4) / n4
    da, db = axa[1] - axa[0], axb[1] - axb[0]
    A1, A2, B1, B2 = np.meshgrid(axa, axa, axb, axb, indexing="ij")
    if (va, vb) == ("zeta", "eta"):
        Z1, Z2, E1, E2 = A1, A2, B1, B2
        X1, X2 = Z1 + E1, Z2 + E2
    elif (va, vb) == ("eta", "xi"):
        E1, E2, X1, X2 = A1, A2, B1, B2
        Z1, Z2 = X1 - E1, X2 - E2
    else:
        X1, X2, E1, E2 = A1, A2, B1, B2
        Z1, Z2 = X1 - E1, X2 - E2
    vals = np.asarray(fn(Z1, Z2, E1, E2), dtype=complex)
    vals *= _band(np.hypot(X1, X2), k)
    vals *= _band(np.hypot(Z1, Z2), k1)
    vals *= _band(np.hypot(E1, E2), k2)
    kernel = np.fft.fftn(vals) * (da * da * db * db) / (2.0 * np.pi) ** 4
    cell = (2.0 * np.pi) ** 4 / (n4**4 * da * da * db * db)
    return float(np.sum(np.abs(kernel)) * cell)

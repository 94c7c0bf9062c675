"""Brute-force ground truth for the Dirichlet-Neumann operator.

The free-boundary Laplace problem is pulled back to the fixed strip
[-1, 0] x torus, where it becomes a variable-coefficient elliptic equation

    P phi = lap_x phi + a~ d_zz phi + b~ . grad d_z phi + c~ d_z phi = 0,
    phi(z=0) = psi,   d_z phi(z=-1) = 0.

This module discretizes P directly (Fourier in x, Chebyshev collocation in
z) and solves it with GMRES preconditioned by the exact flat-interface
solve, which is diagonal per Fourier mode.  It shares nothing with the
fixed-point formulation in :mod:`flatwave.dn`; agreement between the two is
the package's central cross-check.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import lu_factor, lu_solve
from scipy.sparse.linalg import LinearOperator, gmres

from .spectral import Grid
from .strip import StripGrid

__all__ = [
    "DomainDegeneracyError",
    "OracleConvergenceError",
    "VariableCoefficients",
    "OracleSolution",
    "coefficients",
    "solve_strip",
    "dn_oracle",
]


class DomainDegeneracyError(ValueError):
    """The interface dips too close to the bottom (1 + h <= 1/2 somewhere)."""


class OracleConvergenceError(RuntimeError):
    def __init__(self, message, residuals):
        super().__init__(message)
        self.residuals = list(residuals)


@dataclass
class VariableCoefficients:
    """Coefficients of the transformed Laplacian, sampled on (nz, n, n) nodes."""

    a_t: np.ndarray
    b_tx: np.ndarray
    b_ty: np.ndarray
    c_t: np.ndarray


def _check_depth(h: np.ndarray):
    if np.min(1.0 + h) <= 0.5:
        raise DomainDegeneracyError(
            f"1 + h reaches {np.min(1.0 + h):.4f}; the bottom is nearly exposed"
        )


def coefficients(h: np.ndarray, strip: StripGrid) -> VariableCoefficients:
    """Pointwise evaluation of the transformed-Laplacian coefficients.

    a~ = (1 + (z+1)^2 |grad h|^2) / (1+h)^2
    b~ = -2 (z+1) grad h / (1+h)
    c~ = -(z+1) lap h / (1+h) + 2 (z+1) |grad h|^2 / (1+h)^2
    """
    _check_depth(h)
    g = strip.base
    hx, hy = g.grad(h)
    gh2 = hx**2 + hy**2
    lh = g.lap(h)
    zz = strip.z[:, None, None]
    one = (1.0 + h)[None]
    a_t = (1.0 + (zz + 1.0) ** 2 * gh2[None]) / one**2
    b_tx = -2.0 * (zz + 1.0) * hx[None] / one
    b_ty = -2.0 * (zz + 1.0) * hy[None] / one
    c_t = -(zz + 1.0) * lh[None] / one + 2.0 * (zz + 1.0) * gh2[None] / one**2
    return VariableCoefficients(a_t, b_tx, b_ty, c_t)


# -- flat-interface preconditioner ------------------------------------------

_FLAT_CACHE: dict = {}


def _flat_factorization(strip: StripGrid):
    """LU factors of (D^2 - |xi|^2) with Dirichlet top / Neumann bottom rows,
    one per distinct |xi|^2 on the grid."""
    key = strip.key()
    if key in _FLAT_CACHE:
        return _FLAT_CACHE[key]
    g = strip.base
    k2 = np.round(g.kabs**2, 9)
    uniq, inv = np.unique(k2, return_inverse=True)
    order = np.argsort(inv.ravel(), kind="stable")
    counts = np.bincount(inv.ravel(), minlength=len(uniq))
    bounds = np.concatenate([[0], np.cumsum(counts)])
    facs = []
    eye = np.eye(strip.nz)
    for u in uniq:
        A = strip.D2 - u * eye
        A[0, :] = 0.0
        A[0, 0] = 1.0
        A[-1, :] = strip.D[-1, :]
        facs.append(lu_factor(A))
    entry = (facs, order, bounds)
    if len(_FLAT_CACHE) > 4:
        _FLAT_CACHE.pop(next(iter(_FLAT_CACHE)))
    _FLAT_CACHE[key] = entry
    return entry


def _flat_solve(strip: StripGrid, rhs: np.ndarray) -> np.ndarray:
    """Solve the flat problem per Fourier mode; rhs rows carry the boundary data."""
    facs, order, bounds = _flat_factorization(strip)
    nz, n = strip.nz, strip.base.n
    F = np.fft.fft2(rhs, axes=(1, 2)).reshape(nz, -1)
    out = np.empty_like(F)
    for gidx in range(len(facs)):
        cols = order[bounds[gidx]:bounds[gidx + 1]]
        if len(cols):
            out[:, cols] = lu_solve(facs[gidx], F[:, cols])
    return np.fft.ifft2(out.reshape(nz, n, n), axes=(1, 2)).real


def _apply_P(strip: StripGrid, coef: VariableCoefficients, phi: np.ndarray) -> np.ndarray:
    g = strip.base
    F = np.fft.fft2(phi, axes=(1, 2))
    lapx = np.fft.ifft2(-(g.kx**2 + g.ky**2)[None] * F, axes=(1, 2)).real
    dz = strip.dz(phi)
    dzz = strip.dz(dz)
    Fz = np.fft.fft2(dz, axes=(1, 2))
    dzx = np.fft.ifft2(1j * g.kx[None] * Fz, axes=(1, 2)).real
    dzy = np.fft.ifft2(1j * g.ky[None] * Fz, axes=(1, 2)).real
    return lapx + coef.a_t * dzz + coef.b_tx * dzx + coef.b_ty * dzy + coef.c_t * dz


def _residual_rows(strip, coef, phi, psi):
    r = _apply_P(strip, coef, phi)
    r[0] = phi[0] - psi
    r[-1] = np.einsum("j,jkl->kl", strip.D[-1], phi)
    return r


@dataclass
class OracleSolution:
    """Strip potential with its gradient and solve diagnostics."""

    phi: np.ndarray
    gx1: np.ndarray
    gx2: np.ndarray
    gz: np.ndarray
    residuals: list
    interior_residual: float


def solve_strip(
    h: np.ndarray,
    psi: np.ndarray,
    strip: StripGrid,
    tol: float = 1e-12,
    maxiter: int = 200,
) -> OracleSolution:
    """Solve P phi = 0 with phi|_{z=0} = psi, d_z phi|_{z=-1} = 0.

    GMRES on the preconditioned system; the preconditioner is the exact
    h = 0 solve, so the flat problem converges in one iteration.

    Raises
    ------
    OracleConvergenceError
        if GMRES stalls; the exception carries the residual history.
    """
    g = strip.base
    coef = coefficients(h, strip)
    nz, n = strip.nz, g.n
    b = np.zeros((nz, n, n))
    b[0] = psi

    def mv(v):
        phi = v.reshape(nz, n, n)
        return _flat_solve(
            strip, _residual_rows(strip, coef, phi, np.zeros((n, n)))
        ).ravel()

    A = LinearOperator((nz * n * n, nz * n * n), matvec=mv)
    rhs = _flat_solve(strip, b).ravel()
    residuals: list = []
    sol, info = gmres(
        A,
        rhs,
        rtol=tol,
        atol=0.0,
        maxiter=maxiter,
        restart=50,
        callback=lambda r: residuals.append(float(r)),
        callback_type="pr_norm",
    )
    if info != 0:
        raise OracleConvergenceError(
            f"strip solve did not reach rtol={tol} in {maxiter} iterations", residuals
        )
    phi = sol.reshape(nz, n, n)
    res = _apply_P(strip, coef, phi)
    scale = max(
        float(np.abs(np.fft.ifft2(-(g.kx**2 + g.ky**2)[None] * np.fft.fft2(phi, axes=(1, 2)), axes=(1, 2)).real).max()),
        1e-300,
    )
    interior = float(np.abs(res[1:-1]).max()) / scale
    F = np.fft.fft2(phi, axes=(1, 2))
    gx1 = np.fft.ifft2(1j * g.kx[None] * F, axes=(1, 2)).real
    gx2 = np.fft.ifft2(1j * g.ky[None] * F, axes=(1, 2)).real
    gz = strip.dz(phi)
    return OracleSolution(phi, gx1, gx2, gz, residuals, interior)


def dn_oracle(
    h: np.ndarray,
    psi: np.ndarray,
    strip: StripGrid,
    tol: float = 1e-12,
) -> np.ndarray:
    """G(h) psi = (1 + |grad h|^2)/(1 + h) d_z phi|_{z=0} - grad psi . grad h."""
    g = strip.base
    sol = solve_strip(h, psi, strip, tol=tol)
    hx, hy = g.grad(h)
    px, py = g.grad(psi)
    return (1.0 + hx**2 + hy**2) / (1.0 + h) * sol.gz[0] - (px * hx + py * hy)

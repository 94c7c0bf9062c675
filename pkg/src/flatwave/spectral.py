"""Periodic 2D Fourier infrastructure.

Fields are real ``(n, n)`` arrays sampled on the uniform grid of the torus
``[0, L)^2``; spectra are the complex ``(n, n)`` arrays produced by
``numpy.fft.fft2`` (Hermitian-symmetric for real fields).  Everything else in
the package (multipliers, Littlewood-Paley projections, the norm family,
dealiasing) is built on top of the :class:`Grid` object defined here.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

__all__ = [
    "Grid",
    "MultiplierSpec",
    "NormKind",
    "smoothstep",
    "bump",
    "apply_multiplier",
    "lp_project",
    "lp_low",
    "lp_band_weight",
    "norm",
    "norm_h",
    "norm_wtilde",
    "norm_what",
    "norm_pair",
    "multipliers",
]


def smoothstep(t):
    """C-infinity step built from the exp(-1/t) mollifier: 0 for t<=0, 1 for t>=1."""
    t = np.clip(np.asarray(t, dtype=float), 0.0, 1.0)
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        fa = np.where(t > 0.0, np.exp(-1.0 / np.maximum(t, 1e-300)), 0.0)
        fb = np.where(t < 1.0, np.exp(-1.0 / np.maximum(1.0 - t, 1e-300)), 0.0)
    return fa / (fa + fb)


def bump(t):
    """Radial Littlewood-Paley profile: even, 1 on [-5/4, 5/4], 0 outside [-3/2, 3/2]."""
    return smoothstep((1.5 - np.abs(t)) / 0.25)


@dataclass(frozen=True, eq=False)
class Grid:
    """Uniform periodic grid on [0, L)^2 with n points per axis (n a power of two).

    Attributes
    ----------
    n : int
        Points per axis, n >= 16 and a power of two.
    L : float
        Period length.
    """

    n: int
    L: float = 2.0 * np.pi

    def __post_init__(self):
        if self.n < 16 or (self.n & (self.n - 1)) != 0:
            raise ValueError(f"grid size must be a power of two >= 16, got {self.n}")
        if not self.L > 0:
            raise ValueError(f"period length must be positive, got {self.L}")

    # ---- cached geometry -------------------------------------------------
    @property
    def x(self) -> np.ndarray:
        return self._cache("x", lambda: np.arange(self.n) * (self.L / self.n))

    @property
    def mesh(self):
        return self._cache("mesh", lambda: np.meshgrid(self.x, self.x, indexing="ij"))

    @property
    def k1(self) -> np.ndarray:
        """1D angular wavenumbers 2*pi*m/L in FFT order."""
        return self._cache(
            "k1", lambda: 2.0 * np.pi * np.fft.fftfreq(self.n, d=self.L / self.n)
        )

    @property
    def kx(self) -> np.ndarray:
        return self._cache("kx", lambda: np.meshgrid(self.k1, self.k1, indexing="ij")[0])

    @property
    def ky(self) -> np.ndarray:
        return self._cache("ky", lambda: np.meshgrid(self.k1, self.k1, indexing="ij")[1])

    @property
    def kabs(self) -> np.ndarray:
        return self._cache("kabs", lambda: np.hypot(self.kx, self.ky))

    @property
    def dealias_mask(self) -> np.ndarray:
        """2/3-rule mask on integer mode indices (Nyquist zeroed as well)."""

        def make():
            m = np.fft.fftfreq(self.n, d=1.0 / self.n).astype(int)
            cut = self.n // 3
            keep1 = np.abs(m) <= cut
            return keep1[:, None] & keep1[None, :]

        return self._cache("dealias", make)

    @property
    def lp_kmin(self) -> int:
        return int(np.ceil(np.log2(2.0 * np.pi / self.L))) - 1

    @property
    def lp_kmax(self) -> int:
        # top band must cover the corner modes so the partition sums to 1
        return int(np.ceil(np.log2(np.sqrt(2.0) * np.pi * self.n / self.L)))

    def _cache(self, key, builder):
        store = self.__dict__.setdefault("_store", {})
        if key not in store:
            store[key] = builder()
        return store[key]

    # ---- transforms ------------------------------------------------------
    def fft(self, f: np.ndarray) -> np.ndarray:
        return np.fft.fft2(f, axes=(-2, -1))

    def ifft(self, F: np.ndarray) -> np.ndarray:
        return np.fft.ifft2(F, axes=(-2, -1)).real

    def coeffs(self, f: np.ndarray) -> np.ndarray:
        """Normalized Fourier coefficients c_k with f = sum c_k e^{i k x}."""
        return self.fft(f) / self.n**2

    def dealias(self, f: np.ndarray) -> np.ndarray:
        return self.ifft(self.fft(f) * self.dealias_mask)

    def dealias_spec(self, F: np.ndarray) -> np.ndarray:
        return F * self.dealias_mask

    def mul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Pointwise product followed by 2/3 dealiasing."""
        return self.dealias(a * b)

    def mean_zero(self, f: np.ndarray) -> np.ndarray:
        return f - f.mean()

    # ---- calculus --------------------------------------------------------
    def dx(self, f: np.ndarray) -> np.ndarray:
        return self.ifft(1j * self.kx * self.fft(f))

    def dy(self, f: np.ndarray) -> np.ndarray:
        return self.ifft(1j * self.ky * self.fft(f))

    def grad(self, f: np.ndarray):
        F = self.fft(f)
        return self.ifft(1j * self.kx * F), self.ifft(1j * self.ky * F)

    def div(self, fx: np.ndarray, fy: np.ndarray) -> np.ndarray:
        return self.ifft(1j * self.kx * self.fft(fx) + 1j * self.ky * self.fft(fy))

    def lap(self, f: np.ndarray) -> np.ndarray:
        return self.ifft(-(self.kx**2 + self.ky**2) * self.fft(f))

    def integral(self, f: np.ndarray) -> float:
        return float(f.sum() * (self.L / self.n) ** 2)

    def l2(self, f: np.ndarray) -> float:
        """Quadrature-weighted L^2 norm, sqrt(int |f|^2 dx)."""
        return float(np.sqrt(np.sum(np.abs(f) ** 2) * (self.L / self.n) ** 2))

    def inner(self, f: np.ndarray, g: np.ndarray) -> float:
        return float(np.sum(f * g) * (self.L / self.n) ** 2)


# --------------------------------------------------------------------------
# Fourier multipliers
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class MultiplierSpec:
    """A Fourier multiplier m(xi) with its value at xi = 0 pinned explicitly.

    ``symbol(kx, ky)`` is evaluated on the wavenumber meshes; ``zero_mode``
    replaces whatever the symbol returns at xi = 0, so removable singularities
    (1/|xi| factors and friends) never reach the transform.
    """

    symbol: Callable[[np.ndarray, np.ndarray], np.ndarray]
    zero_mode: complex = 0.0
    label: str = ""

    def table(self, grid: Grid) -> np.ndarray:
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            tab = np.asarray(self.symbol(grid.kx, grid.ky), dtype=complex)
        tab = np.broadcast_to(tab, (grid.n, grid.n)).copy()
        tab[0, 0] = self.zero_mode
        if not np.isfinite(self.zero_mode):
            raise ValueError(f"multiplier {self.label!r}: zero_mode is not finite")
        if not np.all(np.isfinite(tab)):
            i, j = np.argwhere(~np.isfinite(tab))[0]
            raise ValueError(
                f"multiplier {self.label!r} is not finite at mode "
                f"({int(np.fft.fftfreq(grid.n, 1 / grid.n)[i])},"
                f"{int(np.fft.fftfreq(grid.n, 1 / grid.n)[j])}), "
                f"xi = ({grid.kx[i, j]:g}, {grid.ky[i, j]:g})"
            )
        return tab

    @staticmethod
    def radial(fn: Callable[[np.ndarray], np.ndarray], zero_mode=0.0, label=""):
        return MultiplierSpec(lambda kx, ky: fn(np.hypot(kx, ky)), zero_mode, label)


def apply_multiplier(grid: Grid, m: MultiplierSpec, f: np.ndarray) -> np.ndarray:
    """Apply a Fourier multiplier to a real field.

    The output is real whenever the symbol is real and even in xi; the real
    part is returned unconditionally and the Hermitian-symmetry invariant is
    exercised by the test suite.
    """
    return grid.ifft(m.table(grid) * grid.fft(f))


class multipliers:
    """The multiplier family used throughout: dispersion and friends."""

    @staticmethod
    def lam() -> MultiplierSpec:
        return MultiplierSpec.radial(
            lambda a: np.sqrt(a * np.tanh(a)), 0.0, "Lambda"
        )

    @staticmethod
    def lam2() -> MultiplierSpec:
        return MultiplierSpec.radial(lambda a: a * np.tanh(a), 0.0, "Lambda^2")

    @staticmethod
    def lam4() -> MultiplierSpec:
        return MultiplierSpec.radial(lambda a: (a * np.tanh(a)) ** 2, 0.0, "Lambda^4")

    @staticmethod
    def abs_grad() -> MultiplierSpec:
        return MultiplierSpec.radial(lambda a: a, 0.0, "|grad|")

    @staticmethod
    def tanh_abs() -> MultiplierSpec:
        return MultiplierSpec.radial(np.tanh, 0.0, "tanh|grad|")

    @staticmethod
    def sqrt_abs() -> MultiplierSpec:
        return MultiplierSpec.radial(np.sqrt, 0.0, "|grad|^1/2")

    @staticmethod
    def lam_minus_sqrt_abs() -> MultiplierSpec:
        # Lambda - |grad|^{1/2} = |grad|^{1/2} (sqrt(tanh) - 1), smoothing at infinity
        return MultiplierSpec.radial(
            lambda a: np.sqrt(a) * (np.sqrt(np.tanh(a)) - 1.0), 0.0, "Lambda-|grad|^1/2"
        )

    @staticmethod
    def identity() -> MultiplierSpec:
        return MultiplierSpec(lambda kx, ky: np.ones_like(kx), 1.0, "identity")

    @staticmethod
    def exp_strip(z: float) -> MultiplierSpec:
        """e^{z |grad|} for z <= 0 (decaying extension into the strip)."""
        if z > 0:
            raise ValueError("exp_strip requires z <= 0")
        return MultiplierSpec.radial(lambda a: np.exp(z * a), 1.0, f"exp({z}|grad|)")


# --------------------------------------------------------------------------
# Littlewood-Paley projections
# --------------------------------------------------------------------------


def lp_band_weight(grid: Grid, k: int) -> np.ndarray:
    """psi_k(|xi|) = bump(|xi|/2^k) - bump(|xi|/2^{k-1}) on the grid modes."""
    a = grid.kabs
    return bump(a / 2.0**k) - bump(a / 2.0 ** (k - 1))


def lp_project(grid: Grid, f: np.ndarray, k: int) -> np.ndarray:
    """Dyadic band projection P_k f; zero field for k outside the grid's range."""
    if k < grid.lp_kmin or k > grid.lp_kmax:
        return np.zeros_like(f)
    return grid.ifft(lp_band_weight(grid, k) * grid.fft(f))


def lp_low(grid: Grid, f: np.ndarray, k: int | None = None) -> np.ndarray:
    """Low-pass bucket P_{<= k}; defaults to the mass below the bottom band."""
    if k is None:
        k = grid.lp_kmin - 1
    return grid.ifft(bump(grid.kabs / 2.0**k) * grid.fft(f))


# --------------------------------------------------------------------------
# Norm family
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class NormKind:
    """One of the three norms: H^s, the W-tilde family, the W-hat family.

    family: "h" (Sobolev, index s >= 0), "wtilde" (gamma), "what" (gamma, alpha
    with 0 <= alpha <= gamma).
    """

    family: str
    gamma: float
    alpha: float = 0.0

    def __post_init__(self):
        if self.family not in ("h", "wtilde", "what"):
            raise ValueError(f"unknown norm family {self.family!r}")
        if self.family == "what" and not (0.0 <= self.alpha <= self.gamma):
            raise ValueError(
                f"what norm requires 0 <= alpha <= gamma, got "
                f"alpha={self.alpha}, gamma={self.gamma}"
            )
        if self.gamma < 0:
            raise ValueError("norm index must be >= 0")


def norm_h(grid: Grid, f: np.ndarray, s: float) -> float:
    c = grid.coeffs(f)
    w = (1.0 + grid.kabs**2) ** s
    return float(grid.L * np.sqrt(np.sum(w * np.abs(c) ** 2)))


def _band_sups(grid: Grid, f: np.ndarray):
    F = grid.fft(f)
    sups = {}
    for k in range(grid.lp_kmin, grid.lp_kmax + 1):
        sups[k] = float(np.abs(grid.ifft(lp_band_weight(grid, k) * F)).max())
    low = float(np.abs(grid.ifft(bump(grid.kabs / 2.0 ** (grid.lp_kmin - 1)) * F)).max())
    return sups, low


def norm_wtilde(grid: Grid, f: np.ndarray, gamma: float) -> float:
    """sum_{k>=0} 2^{gamma k} ||P_k f||_inf + ||P_{<=0} f||_inf."""
    sups, _ = _band_sups(grid, f)
    total = sum(2.0 ** (gamma * k) * v for k, v in sups.items() if k >= 0)
    total += float(np.abs(lp_low(grid, f, 0)).max())
    return float(total)


def norm_what(grid: Grid, f: np.ndarray, gamma: float, alpha: float) -> float:
    """sum_k (2^{alpha k} + 2^{gamma k}) ||P_k f||_inf over representable bands."""
    sups, low = _band_sups(grid, f)
    total = sum((2.0 ** (alpha * k) + 2.0 ** (gamma * k)) * v for k, v in sups.items())
    klow = grid.lp_kmin - 1
    total += (2.0 ** (alpha * klow) + 2.0 ** (gamma * klow)) * low
    return float(total)


def norm(grid: Grid, f: np.ndarray, kind: NormKind) -> float:
    if kind.family == "h":
        return norm_h(grid, f, kind.gamma)
    if kind.family == "wtilde":
        return norm_wtilde(grid, f, kind.gamma)
    return norm_what(grid, f, kind.gamma, kind.alpha)


def norm_pair(grid: Grid, f: np.ndarray, g: np.ndarray, kind: NormKind) -> float:
    """Norm of a pair of fields, realized as the sum of component norms."""
    return norm(grid, f, kind) + norm(grid, g, kind)

"""Vertical discretization of the strip [-1, 0]: Chebyshev nodes and quadrature."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .spectral import Grid

__all__ = ["StripGrid", "cheb_nodes_diff", "clenshaw_curtis", "barycentric_matrix"]


def cheb_nodes_diff(nz: int):
    """Chebyshev-Gauss-Lobatto nodes on [-1, 0] and the d/dz matrix.

    Nodes are ordered from the surface down: z[0] = 0, z[-1] = -1.
    """
    N = nz - 1
    theta = np.pi * np.arange(nz) / N
    x = np.cos(theta)  # 1 .. -1
    c = np.hstack([2.0, np.ones(N - 1), 2.0]) * (-1.0) ** np.arange(nz)
    X = np.tile(x, (nz, 1)).T
    dX = X - X.T
    D = np.outer(c, 1.0 / c) / (dX + np.eye(nz))
    D -= np.diag(D.sum(axis=1))
    # x in [-1,1] -> z = (x-1)/2 in [-1,0]
    return (x - 1.0) / 2.0, 2.0 * D


def clenshaw_curtis(a: float, b: float, m: int):
    """Clenshaw-Curtis nodes and weights on [a, b] (m nodes, endpoints included)."""
    N = m - 1
    theta = np.pi * np.arange(m) / N
    x = np.cos(theta)
    w = np.zeros(m)
    v = np.ones(N - 1)
    for k in range(1, N // 2 + 1):
        fac = 2.0 if 2 * k != N else 1.0
        v -= fac * np.cos(2.0 * k * theta[1:-1]) / (4.0 * k * k - 1.0)
    w[0] = w[-1] = 1.0 / (N * N - 1 + (N % 2))
    w[1:-1] = 2.0 * v / N
    nodes = 0.5 * (b + a) + 0.5 * (b - a) * x
    return nodes, w * 0.5 * (b - a)


def _bary_weights(nodes: np.ndarray) -> np.ndarray:
    w = np.ones(len(nodes))
    for i in range(len(nodes)):
        w[i] = 1.0 / np.prod(nodes[i] - np.delete(nodes, i))
    return w


def barycentric_matrix(nodes: np.ndarray, pts: np.ndarray) -> np.ndarray:
    """Interpolation matrix from values at `nodes` to values at `pts`."""
    bw = _bary_weights(nodes)
    M = np.zeros((len(pts), len(nodes)))
    for i, p in enumerate(pts):
        dif = p - nodes
        j = int(np.argmin(np.abs(dif)))
        if abs(dif[j]) < 1e-14:
            M[i, j] = 1.0
        else:
            t = bw / dif
            M[i] = t / t.sum()
    return M


@dataclass(frozen=True, eq=False)
class StripGrid:
    """Horizontal grid x vertical Chebyshev nodes z in [-1, 0].

    Vertical data arrays are shaped (nz, n, n) with index 0 at the surface
    z = 0 and index nz-1 at the bottom z = -1.
    """

    base: Grid
    nz: int = 33

    def __post_init__(self):
        if self.nz < 9:
            raise ValueError(f"need at least 9 vertical nodes, got {self.nz}")

    @property
    def z(self) -> np.ndarray:
        return self._cache("z", lambda: cheb_nodes_diff(self.nz)[0])

    @property
    def D(self) -> np.ndarray:
        return self._cache("D", lambda: cheb_nodes_diff(self.nz)[1])

    @property
    def D2(self) -> np.ndarray:
        return self._cache("D2", lambda: self.D @ self.D)

    @property
    def weights(self) -> np.ndarray:
        """Clenshaw-Curtis weights for int_{-1}^0 dz on the strip nodes."""

        def make():
            _, w = clenshaw_curtis(0.0, -1.0, self.nz)
            return -w  # nodes run 0 .. -1, orientation flip

        return self._cache("w", make)

    def _cache(self, key, builder):
        store = self.__dict__.setdefault("_store", {})
        if key not in store:
            store[key] = builder()
        return store[key]

    def dz(self, f: np.ndarray) -> np.ndarray:
        """d/dz along the vertical axis of an (nz, n, n) array."""
        return np.einsum("ij,j...->i...", self.D, f)

    def key(self):
        return (self.base.n, self.base.L, self.nz)

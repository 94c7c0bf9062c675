"""Binary snapshot formats for fields and strip fields.

Field file (`FLD1`): magic, uint32 n, float64 L, then n*n float64 samples in
row-major order.  Strip-field file (`STP1`): magic, uint32 n, uint32 nz,
float64 L, then the three components gx1, gx2, gz, each nz*n*n float64
row-major.  Little-endian throughout.
"""

from __future__ import annotations

import struct

import numpy as np

from .dn import StripField
from .spectral import Grid
from .strip import StripGrid

__all__ = ["save_field", "load_field", "save_strip_field", "load_strip_field"]

_FLD = b"FLD1"
_STP = b"STP1"


def save_field(path, grid: Grid, values: np.ndarray) -> None:
    values = np.ascontiguousarray(values, dtype="<f8")
    if values.shape != (grid.n, grid.n):
        raise ValueError(f"field shape {values.shape} does not match n={grid.n}")
    with open(path, "wb") as fh:
        fh.write(_FLD)
        fh.write(struct.pack("<Id", grid.n, grid.L))
        fh.write(values.tobytes())


def load_field(path) -> tuple[Grid, np.ndarray]:
    with open(path, "rb") as fh:
        magic = fh.read(4)
        if magic != _FLD:
            raise ValueError(f"not a field snapshot (magic {magic!r})")
        n, L = struct.unpack("<Id", fh.read(12))
        data = np.frombuffer(fh.read(8 * n * n), dtype="<f8").reshape(n, n)
    return Grid(n, L), data.copy()


def save_strip_field(path, strip: StripGrid, f: StripField) -> None:
    n, nz = strip.base.n, strip.nz
    with open(path, "wb") as fh:
        fh.write(_STP)
        fh.write(struct.pack("<IId", n, nz, strip.base.L))
        for comp in (f.gx1, f.gx2, f.gz):
            arr = np.ascontiguousarray(comp, dtype="<f8")
            if arr.shape != (nz, n, n):
                raise ValueError(f"component shape {arr.shape} != ({nz},{n},{n})")
            fh.write(arr.tobytes())


def load_strip_field(path) -> tuple[StripGrid, StripField]:
    with open(path, "rb") as fh:
        magic = fh.read(4)
        if magic != _STP:
            raise ValueError(f"not a strip snapshot (magic {magic!r})")
        n, nz, L = struct.unpack("<IId", fh.read(16))
        comps = []
        for _ in range(3):
            comps.append(
                np.frombuffer(fh.read(8 * nz * n * n), dtype="<f8")
                .reshape(nz, n, n)
                .copy()
            )
    return StripGrid(Grid(n, L), nz), StripField(*comps)

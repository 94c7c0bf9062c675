import numpy as np
import pytest

from flatwave.dn import StripField
from flatwave.snapshots import (
    load_field,
    load_strip_field,
    save_field,
    save_strip_field,
)
from flatwave.spectral import Grid
from flatwave.strip import StripGrid


def test_field_round_trip(tmp_path):
    g = Grid(32, L=7.5)
    rng = np.random.default_rng(0)
    f = rng.normal(size=(32, 32))
    p = tmp_path / "f.fld"
    save_field(p, g, f)
    g2, f2 = load_field(p)
    assert g2.n == 32 and g2.L == 7.5
    assert np.array_equal(f, f2)


def test_field_shape_mismatch(tmp_path):
    with pytest.raises(ValueError):
        save_field(tmp_path / "x.fld", Grid(32), np.zeros((16, 16)))


def test_field_bad_magic(tmp_path):
    p = tmp_path / "junk.fld"
    p.write_bytes(b"NOPE" + b"\0" * 32)
    with pytest.raises(ValueError, match="magic"):
        load_field(p)


def test_strip_round_trip(tmp_path):
    strip = StripGrid(Grid(16), nz=9)
    rng = np.random.default_rng(1)
    f = StripField(*[rng.normal(size=(9, 16, 16)) for _ in range(3)])
    p = tmp_path / "s.stp"
    save_strip_field(p, strip, f)
    s2, f2 = load_strip_field(p)
    assert s2.nz == 9 and s2.base.n == 16
    for a, b in [(f.gx1, f2.gx1), (f.gx2, f2.gx2), (f.gz, f2.gz)]:
        assert np.array_equal(a, b)


def test_strip_grid_invariants():
    with pytest.raises(ValueError):
        StripGrid(Grid(16), nz=5)
    s = StripGrid(Grid(16), nz=9)
    assert s.z[0] == 0.0 and s.z[-1] == -1.0
    # Clenshaw-Curtis weights integrate low polynomials exactly on [-1, 0]
    for p, exact in [(0, 1.0), (1, -0.5), (2, 1.0 / 3.0), (3, -0.25)]:
        assert abs(np.sum(s.weights * s.z**p) - exact) < 1e-13
    # spectral differentiation of a smooth profile
    f = np.exp(s.z)
    assert np.max(np.abs(s.D @ f - f)) < 1e-9

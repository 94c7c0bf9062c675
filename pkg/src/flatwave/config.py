"""Run configuration: plain-text `key = value` with dotted sections.

Grammar: one `section.key = value` per line; blank lines and `#` comments
ignored.  Every key is validated against the schema below before any
computation starts; unknown keys are rejected with their line number.
Values are ints, floats, booleans (`true`/`false`), bare strings, or
comma/semicolon lists where noted.  No environment-variable overrides
except the output directory (``FLATWAVE_OUT``), handled by the CLI.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = ["ConfigError", "RunConfig"]


class ConfigError(ValueError):
    pass


def _parse_bool(s: str) -> bool:
    if s.lower() in ("true", "1", "yes"):
        return True
    if s.lower() in ("false", "0", "no"):
        return False
    raise ValueError(f"not a boolean: {s!r}")


def _parse_modes(s: str):
    """Mode list 'kx,ky,amp,phase;kx,ky,amp,phase;...' (may be empty)."""
    out = []
    s = s.strip()
    if not s:
        return out
    for part in s.split(";"):
        bits = [b.strip() for b in part.split(",")]
        if len(bits) != 4:
            raise ValueError(f"mode entry needs kx,ky,amp,phase: {part!r}")
        out.append((int(bits[0]), int(bits[1]), float(bits[2]), float(bits[3])))
    return out


def _parse_floats(s: str):
    return [float(b) for b in s.split(",") if b.strip()]


def _power_of_two(v: int) -> int:
    if v < 16 or (v & (v - 1)) != 0:
        raise ValueError(f"grid size must be a power of two >= 16, got {v}")
    return v


def _positive(v):
    if not v > 0:
        raise ValueError(f"must be positive, got {v}")
    return v


def _nonneg_int(v: int) -> int:
    if v < 0:
        raise ValueError(f"must be >= 0, got {v}")
    return v


# key -> (converter, validator, default)
_SCHEMA = {
    "grid.n": (int, _power_of_two, 64),
    "grid.L": (float, _positive, float(2.0 * np.pi)),
    "grid.nz": (int, lambda v: v if v >= 9 else (_ for _ in ()).throw(ValueError("nz >= 9")), 33),
    "physics.epsilon": (float, _positive, 0.01),
    "physics.h_modes": (_parse_modes, lambda v: v, [(1, 0, 1.0, 0.0)]),
    "physics.psi_modes": (_parse_modes, lambda v: v, [(0, 1, 1.0, 0.0)]),
    "solver.dn_engine": (
        str,
        lambda v: v if v in ("series", "fixed_point", "oracle") else (_ for _ in ()).throw(
            ValueError(f"dn_engine must be series|fixed_point|oracle, got {v!r}")
        ),
        "series",
    ),
    "solver.tol": (float, _positive, 1e-10),
    "solver.max_iter": (int, _positive, 50),
    "solver.smallness": (float, _positive, 0.3),
    "solver.series_order": (int, _positive, 6),
    "diagnostics.n0": (
        int,
        lambda v: v if v >= 1 else (_ for _ in ()).throw(ValueError("n0 >= 1")),
        6,
    ),
    "diagnostics.alpha": (
        float,
        lambda v: v if 0.0 < v <= 1.0 else (_ for _ in ()).throw(
            ValueError("alpha in (0, 1]")
        ),
        0.5,
    ),
    "diagnostics.sample_every": (int, _positive, 100),
    "simulate.dt": (float, _positive, 1e-3),
    "simulate.t_final": (float, lambda v: v if v >= 0 else (_ for _ in ()).throw(ValueError("t_final >= 0")), 1.0),
    "simulate.nonlinear": (_parse_bool, lambda v: v, True),
    "simulate.snapshot_every": (int, _nonneg_int, 0),
    "symbols.samples": (int, _positive, 10000),
    "symbols.straddle_samples": (int, _nonneg_int, 1000),
    "symbols.box": (float, _positive, 10.0),
    "symbols.eta_zero": (_parse_bool, lambda v: v, False),
    "study.eps_values": (_parse_floats, lambda v: v if v else (_ for _ in ()).throw(ValueError("need eps values")), [0.1, 0.05, 0.025, 0.0125]),
    "study.pairs": (int, _positive, 20),
    "study.band_limit": (int, _positive, 3),
    "study.h_wnorm": (float, _positive, 0.05),
    "study.slope_tolerance": (float, _positive, 0.15),
    "study.agreement_threshold": (float, _positive, 1e-5),
    "monitor.compare_dt_halved": (_parse_bool, lambda v: v, False),
}


@dataclass
class RunConfig:
    values: dict = field(default_factory=dict)

    def __post_init__(self):
        merged = {k: spec[2] for k, spec in _SCHEMA.items()}
        merged.update(self.values)
        self.values = merged

    def __getitem__(self, key):
        return self.values[key]

    @classmethod
    def from_text(cls, text: str) -> "RunConfig":
        vals: dict = {}
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
            key, _, val = line.partition("=")
            key, val = key.strip(), val.strip()
            if key not in _SCHEMA:
                raise ConfigError(f"line {lineno}: unknown key {key!r}")
            conv, check, _ = _SCHEMA[key]
            try:
                vals[key] = check(conv(val))
            except (ValueError, TypeError) as exc:
                raise ConfigError(f"line {lineno}: bad value for {key}: {exc}") from None
        return cls(vals)

    @classmethod
    def from_file(cls, path) -> "RunConfig":
        with open(path) as fh:
            return cls.from_text(fh.read())

    def resolved_lines(self):
        """Canonical `key = value` lines for embedding in output headers."""
        out = []
        for key in sorted(self.values):
            v = self.values[key]
            if isinstance(v, list) and v and isinstance(v[0], tuple):
                s = ";".join(",".join(repr(x) for x in m) for m in v)
            elif isinstance(v, list):
                s = ",".join(repr(x) for x in v)
            elif isinstance(v, bool):
                s = "true" if v else "false"
            elif isinstance(v, float):
                s = repr(v)
            else:
                s = str(v)
            out.append(f"{key} = {s}")
        return out

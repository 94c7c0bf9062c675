"""Command-line entry point.

Verbs: verify-symbols (quadratic-symbol cancellation sweep), dn-study
(fixed point vs collocation oracle, expansion-order ladder), simulate
(time integration with diagnostics), energy-monitor (growth-rate ratio
along a run, optionally under time-step refinement).

Every output CSV starts with `#` header lines carrying the format version,
the seed, and the fully resolved configuration, so a run is reproducible
from its own output.  Exit codes: 0 success, 2 configuration error,
3 numerical failure, 4 acceptance-threshold failure.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from .config import ConfigError, RunConfig

FORMAT_VERSION = "flatwave-csv-1"

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_THRESHOLD = 4


def _header_lines(cfg: RunConfig, seed: int, kind: str):
    lines = [f"# format = {FORMAT_VERSION}", f"# kind = {kind}", f"# seed = {seed}"]
    lines += [f"# {line}" for line in cfg.resolved_lines()]
    return lines


def _fmt(v) -> str:
    return repr(float(v)) if isinstance(v, (float, np.floating)) else str(v)


def _write_csv(path, header_lines, meta: dict, column_row: str, rows):
    with open(path, "w") as fh:
        for line in header_lines:
            fh.write(line + "\n")
        for key, val in meta.items():
            fh.write(f"# {key} = {_fmt(val)}\n")
        fh.write(column_row + "\n")
        for row in rows:
            fh.write(row + "\n")


def _richardson_slope(eps, err):
    return float(np.log(err[-2] / err[-1]) / np.log(eps[-2] / eps[-1]))


# --------------------------------------------------------------------------


def cmd_verify_symbols(cfg: RunConfig, out_dir: str, seed: int) -> int:
    from .symbols import depth_comparison, qtilde_assembled, qtilde_closed

    rng = np.random.default_rng(seed)
    box = cfg["symbols.box"]
    nsamp = cfg["symbols.samples"]
    nstrad = cfg["symbols.straddle_samples"]
    if cfg["symbols.eta_zero"]:
        xi = rng.uniform(-box, box, size=(nsamp, 2))
        eta = np.zeros((nsamp, 2))
    else:
        xi = rng.uniform(-box, box, size=(nsamp, 2))
        eta = rng.uniform(-box, box, size=(nsamp, 2))
        if nstrad:
            ang = rng.uniform(0.0, 2.0 * np.pi, nstrad)
            base = rng.uniform(-box, box, size=(nstrad, 2))
            r = np.hypot(base[:, 0], base[:, 1]) * (
                1.0 + rng.choice([-1.0, 1.0], nstrad) * 1e-6
            )
            xi_s = np.stack([r * np.cos(ang), r * np.sin(ang)], axis=1)
            xi = np.vstack([xi, xi_s])
            eta = np.vstack([eta, base])
    z1, z2 = xi[:, 0] - eta[:, 0], xi[:, 1] - eta[:, 1]
    closed = qtilde_closed(z1, z2, eta[:, 0], eta[:, 1])
    assembled = qtilde_assembled(z1, z2, eta[:, 0], eta[:, 1])
    diff = assembled - closed
    rel = np.abs(diff) / (1.0 + np.abs(closed))
    flat, infinite = depth_comparison(xi, eta)
    xia = np.hypot(xi[:, 0], xi[:, 1])
    etaa = np.hypot(eta[:, 0], eta[:, 1])
    with np.errstate(invalid="ignore", divide="ignore"):
        cosang = np.where(
            (xia > 0) & (etaa > 0),
            (xi[:, 0] * eta[:, 0] + xi[:, 1] * eta[:, 1]) / np.maximum(xia * etaa, 1e-300),
            0.0,
        )
    angle = np.arccos(np.clip(cosang, -1.0, 1.0))
    rows = [
        ",".join(_fmt(v) for v in (xia[i], etaa[i], angle[i], flat[i], infinite[i], diff[i]))
        for i in range(len(xia))
    ]
    max_rel = float(rel.max())
    _write_csv(
        os.path.join(out_dir, "symbols.csv"),
        _header_lines(cfg, seed, "symbols"),
        {"max_rel_cancellation_error": max_rel},
        "xi_abs,eta_abs,angle,q_flat,q_infinite,assembled_minus_closed",
        rows,
    )
    print(f"symbol cancellation: max relative error {max_rel:.3e} over {len(xia)} samples")
    return EXIT_OK if max_rel < 1e-8 else EXIT_THRESHOLD


def _band_limited(grid, rng, kmax, nmodes=8):
    F = np.zeros((grid.n, grid.n), complex)
    modes = np.fft.fftfreq(grid.n, 1 / grid.n).astype(int)
    count = 0
    while count < nmodes:
        i, j = rng.integers(0, grid.n, 2)
        if (i, j) == (0, 0) or abs(modes[i]) > kmax or abs(modes[j]) > kmax:
            continue
        F[i, j] = rng.normal() + 1j * rng.normal()
        count += 1
    f = np.fft.ifft2(F).real
    return f / np.abs(f).max()


def cmd_dn_study(cfg: RunConfig, out_dir: str, seed: int) -> int:
    from .dn import (
        SmallnessError,
        cubic_part,
        dn_compute,
        quadratic_part,
        smallness_norm,
    )
    from .oracle import dn_oracle
    from .spectral import Grid, norm_wtilde
    from .strip import StripGrid

    rng = np.random.default_rng(seed)
    grid = Grid(cfg["grid.n"], cfg["grid.L"])
    strip = StripGrid(grid, cfg["grid.nz"])
    tol = cfg["solver.tol"]
    rows, meta = [], {}
    # (a) agreement between the fixed point and the collocation oracle
    worst = 0.0
    try:
        for _ in range(cfg["study.pairs"]):
            h = _band_limited(grid, rng, cfg["study.band_limit"])
            h *= cfg["study.h_wnorm"] / norm_wtilde(grid, h, 1.0)
            psi = _band_limited(grid, rng, cfg["study.band_limit"])
            Gf = dn_compute(h, psi, strip, tol=tol, smallness=cfg["solver.smallness"])
            Go = dn_oracle(h, psi, strip, tol=tol)
            rel = grid.l2(Gf - Go) / grid.l2(Go)
            rows.append(f"agreement,{_fmt(rel)},0.0")
            worst = max(worst, rel)
        meta["agreement_max"] = worst
        # (b) expansion-order ladder on the cosine fixture
        X, Y = grid.mesh
        h0, psi = np.cos(X), np.cos(Y)
        lam2psi = grid.ifft(grid.kabs * np.tanh(grid.kabs) * grid.fft(psi))
        epss = np.array(cfg["study.eps_values"])
        errs = {1: [], 2: [], 3: []}
        for eps in epss:
            h = eps * h0
            G = dn_compute(h, psi, strip, tol=1e-13, smallness=cfg["solver.smallness"])
            q = quadratic_part(grid, h, psi)
            c = cubic_part(h, psi, strip)
            errs[1].append(grid.l2(G - lam2psi))
            errs[2].append(grid.l2(G - lam2psi - q))
            errs[3].append(grid.l2(G - lam2psi - q - c))
        for order in (1, 2, 3):
            for e, err in zip(epss, errs[order]):
                rows.append(f"order{order},{_fmt(e)},{_fmt(err)}")
            meta[f"slope_order{order}"] = _richardson_slope(epss, errs[order])
            # least-squares fit over all eps values (what the plots annotate)
            meta[f"lsq_slope_order{order}"] = float(
                np.polyfit(np.log(epss), np.log(errs[order]), 1)[0]
            )
    except SmallnessError as exc:
        meta["refusal"] = str(exc)
        _write_csv(
            os.path.join(out_dir, "dn_study.csv"),
            _header_lines(cfg, seed, "dn-study"),
            meta,
            "series,eps,error",
            rows,
        )
        print(f"dn study refused: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    _write_csv(
        os.path.join(out_dir, "dn_study.csv"),
        _header_lines(cfg, seed, "dn-study"),
        meta,
        "series,eps,error",
        rows,
    )
    stol = cfg["study.slope_tolerance"]
    ok = worst < cfg["study.agreement_threshold"]
    for order in (1, 2, 3):
        ok = ok and abs(meta[f"slope_order{order}"] - order) < stol
    print(
        "dn study: agreement {:.3e}, slopes {:.3f} {:.3f} {:.3f}".format(
            worst, meta["slope_order1"], meta["slope_order2"], meta["slope_order3"]
        )
    )
    return EXIT_OK if ok else EXIT_THRESHOLD


def _initial_state(cfg: RunConfig, grid):
    from .evolution import SurfaceState

    X, Y = grid.mesh
    eps = cfg["physics.epsilon"]
    h = np.zeros((grid.n, grid.n))
    psi = np.zeros((grid.n, grid.n))
    for kx, ky, amp, phase in cfg["physics.h_modes"]:
        h += eps * amp * np.cos(kx * X * 2 * np.pi / grid.L + ky * Y * 2 * np.pi / grid.L + phase)
    for kx, ky, amp, phase in cfg["physics.psi_modes"]:
        psi += eps * amp * np.cos(kx * X * 2 * np.pi / grid.L + ky * Y * 2 * np.pi / grid.L + phase)
    return SurfaceState(grid, h, psi)


def _engine_from_cfg(cfg: RunConfig, grid):
    from .evolution import make_engine

    return make_engine(
        cfg["solver.dn_engine"],
        grid,
        nz=cfg["grid.nz"],
        tol=cfg["solver.tol"],
        order=cfg["solver.series_order"],
    )


def _run_simulation(cfg: RunConfig, out_dir: str, snapshots: bool):
    from .evolution import DiagnosticsRecord, StageBlowupError, energy_monitor, simulate, step
    from .snapshots import save_field
    from .spectral import Grid

    grid = Grid(cfg["grid.n"], cfg["grid.L"])
    state = _initial_state(cfg, grid)
    engine = _engine_from_cfg(cfg, grid)
    dt = cfg["simulate.dt"]
    n_steps = int(round(cfg["simulate.t_final"] / dt)) if cfg["simulate.t_final"] > 0 else 0
    nonlinear = cfg["simulate.nonlinear"]
    cadence = cfg["diagnostics.sample_every"]
    snap_every = cfg["simulate.snapshot_every"]
    samples = [state.copy()]
    aborted = None
    for i in range(n_steps):
        try:
            state = step(state, dt, engine, nonlinear)
        except StageBlowupError as exc:
            aborted = str(exc)
            break
        if (i + 1) % cadence == 0 or i + 1 == n_steps:
            samples.append(state.copy())
        if snapshots and snap_every and (i + 1) % snap_every == 0:
            save_field(os.path.join(out_dir, f"h_{i + 1:08d}.fld"), grid, state.h)
            save_field(os.path.join(out_dir, f"psi_{i + 1:08d}.fld"), grid, state.psi)
    if len(samples) >= 3:
        records = energy_monitor(
            samples, engine, cfg["diagnostics.n0"], cfg["diagnostics.alpha"], nonlinear
        )
    else:
        from .evolution import hamiltonian

        records = [
            DiagnosticsRecord(
                s.t, hamiltonian(s, engine), 0.0, 0.0, 0.0, 0.0, 0.0, 0.0
            )
            for s in samples
        ]
    return records, aborted


def cmd_simulate(cfg: RunConfig, out_dir: str, seed: int) -> int:
    from .evolution import DiagnosticsRecord

    records, aborted = _run_simulation(cfg, out_dir, snapshots=True)
    meta = {}
    h0 = records[0].hamiltonian
    drift = max(abs(r.hamiltonian - h0) for r in records) / max(abs(h0), 1e-300)
    meta["hamiltonian_drift"] = drift
    if aborted:
        meta["aborted"] = aborted
    _write_csv(
        os.path.join(out_dir, "trajectory.csv"),
        _header_lines(cfg, seed, "simulate"),
        meta,
        DiagnosticsRecord.CSV_HEADER,
        [r.csv_row() for r in records],
    )
    if aborted:
        print(f"simulation aborted: {aborted}", file=sys.stderr)
        return EXIT_NUMERICAL
    print(f"simulate: {len(records)} samples, Hamiltonian drift {drift:.3e}")
    return EXIT_OK


def cmd_energy_monitor(cfg: RunConfig, out_dir: str, seed: int) -> int:
    from .evolution import DiagnosticsRecord

    records, aborted = _run_simulation(cfg, out_dir, snapshots=False)
    if aborted:
        print(f"monitor aborted: {aborted}", file=sys.stderr)
        return EXIT_NUMERICAL
    interior = records[1:-1] if len(records) > 2 else records
    max_ratio = max((abs(r.ratio) for r in interior), default=0.0)
    meta = {"max_ratio": max_ratio}
    if cfg["monitor.compare_dt_halved"]:
        half = RunConfig(dict(cfg.values))
        half.values["simulate.dt"] = cfg["simulate.dt"] / 2.0
        half.values["diagnostics.sample_every"] = cfg["diagnostics.sample_every"] * 2
        records2, aborted2 = _run_simulation(half, out_dir, snapshots=False)
        if aborted2:
            print(f"refined monitor aborted: {aborted2}", file=sys.stderr)
            return EXIT_NUMERICAL
        interior2 = records2[1:-1] if len(records2) > 2 else records2
        max2 = max((abs(r.ratio) for r in interior2), default=0.0)
        meta["max_ratio_half_dt"] = max2
        meta["ratio_change"] = abs(max2 - max_ratio) / max(max_ratio, 1e-300)
    _write_csv(
        os.path.join(out_dir, "energy_monitor.csv"),
        _header_lines(cfg, seed, "energy-monitor"),
        meta,
        DiagnosticsRecord.CSV_HEADER,
        [r.csv_row() for r in records],
    )
    print(f"energy monitor: max ratio {max_ratio:.6g}")
    return EXIT_OK


# --------------------------------------------------------------------------


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="flatwave",
        description="Flat-bottom water-wave toolkit: symbol checks, DN studies, simulation.",
    )
    parser.add_argument("command", choices=["verify-symbols", "dn-study", "simulate", "energy-monitor"])
    parser.add_argument("--config", required=True, help="path to the run configuration")
    parser.add_argument("--out", default=None, help="output directory (default ./out or FLATWAVE_OUT)")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)

    out_dir = args.out or os.environ.get("FLATWAVE_OUT", "out")
    try:
        cfg = RunConfig.from_file(args.config)
    except FileNotFoundError:
        print(f"config not found: {args.config}", file=sys.stderr)
        return EXIT_CONFIG
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    os.makedirs(out_dir, exist_ok=True)
    dispatch = {
        "verify-symbols": cmd_verify_symbols,
        "dn-study": cmd_dn_study,
        "simulate": cmd_simulate,
        "energy-monitor": cmd_energy_monitor,
    }
    try:
        return dispatch[args.command](cfg, out_dir, args.seed)
    except Exception as exc:  # numerical failures surface as exit 3
        print(f"{args.command} failed: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())

"""Command-line interface.

Subcommands: simulate, preset, sweep, bisect, convergence.  All but preset
read a flat key = value config file.  Exit codes: 0 success, 1 validation
error, 2 numerical abort.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

import numpy as np

from . import convergence as convergence_mod
from . import csvio, dynamics, plotting, presets
from .config import RunConfig, parse_config
from .errors import (
    BracketError,
    BudgetExceeded,
    ChemoFrontError,
    ConfigError,
    HypothesisViolation,
    InsufficientData,
    InvalidArgument,
    NonFiniteAbort,
    SingularSystem,
    UnknownPreset,
)
from .grid import build_grid
from .model import check_hypotheses, max_stable_timestep
from .stepper import run

log = logging.getLogger(__name__)

MAX_DEFAULT_STEPS = 200_000_000


def _load_config(path: str, expected_mode: str) -> RunConfig:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc}") from exc
    cfg = parse_config(text)
    if cfg.mode != expected_mode:
        raise ConfigError(
            f"config has mode = {cfg.mode!r} but the {expected_mode!r} "
            "subcommand was invoked"
        )
    return cfg


def _grid_for(cfg: RunConfig):
    """Resolve the time step: explicit tau, or the conservative default."""
    if cfg.tau is not None:
        return build_grid(cfg.M, cfg.tau, cfg.T)
    h = 1.0 / cfg.M
    g0 = cfg.params.h0 ** 2
    sigma = cfg.params.sigma
    w0_front = sigma * float(np.cos(0.5 * np.pi * (1.0 - h)))
    tau = 0.9 * max_stable_timestep(cfg.params, h, g0, cfg.T, sigma, w0_front)
    if tau <= 0 or cfg.T / tau > MAX_DEFAULT_STEPS:
        raise ConfigError(
            f"default tau = {tau:g} implies more than {MAX_DEFAULT_STEPS} steps; "
            "set tau explicitly (with allow_unstable_tau = true for steps up to "
            "the diffusion cap 0.45*h0^2/M^2)"
        )
    return build_grid(cfg.M, tau, cfg.T)


def _warn_hypotheses(cfg: RunConfig) -> None:
    report = check_hypotheses(cfg.params)
    for name, margin in report.margins.items():
        if margin <= 0:
            log.warning("hypothesis %s fails (margin %g); continuing", name, margin)


def _outdir(cfg: RunConfig, override: str | None) -> Path:
    return csvio.resolve_outdir(override if override is not None else cfg.output_dir)


def cmd_simulate(args) -> int:
    cfg = _load_config(args.config, "simulate")
    _warn_hypotheses(cfg)
    grid = _grid_for(cfg)
    traj = run(
        cfg.params, grid,
        sample_every=cfg.sample_every,
        snapshot_times=cfg.snapshot_times,
        window=cfg.window,
        allow_unstable_tau=cfg.allow_unstable_tau,
    )
    outdir = _outdir(cfg, args.out)
    paths = [csvio.write_timeseries(traj, outdir / "timeseries.csv")]
    for snap in traj.snapshots:
        paths.append(csvio.write_snapshot(snap, outdir / f"snapshot_t{snap.t:.6g}.csv"))
    paths.append(
        plotting.emit_plot(
            [
                plotting.PlotSeries("h(t)/t", traj.t, traj.h_over_t),
                plotting.PlotSeries("dh/dt", traj.t, traj.dh_dt),
            ],
            outdir / "speed.svg",
            title="front speed", xlabel="t", ylabel="speed",
        )
    )
    outcome = dynamics.classify(traj, cfg.params)
    print(f"outcome: {outcome.kind} ({outcome.evidence})")
    for p in paths:
        print(p)
    return 0


def cmd_preset(args) -> int:
    for path in presets.run_preset(args.id, args.out):
        print(path)
    return 0


def cmd_sweep(args) -> int:
    cfg = _load_config(args.config, "sweep")
    _warn_hypotheses(cfg)
    grid = _grid_for(cfg)
    report_times = cfg.report_times
    if report_times is None:
        report_times = [float(t) for t in range(1, int(cfg.T) + 1)]
    table = dynamics.sweep(
        cfg.params, grid, cfg.axis, cfg.values, report_times,
        sample_every=cfg.sample_every, window=cfg.window,
        allow_unstable_tau=cfg.allow_unstable_tau,
    )
    path = csvio.write_table(table, _outdir(cfg, args.out) / "table.csv")
    print(path)
    return 0


def cmd_bisect(args) -> int:
    cfg = _load_config(args.config, "bisect")
    _warn_hypotheses(cfg)
    grid = _grid_for(cfg)
    result = dynamics.bisect_critical(
        cfg.parameter, cfg.bracket_lo, cfg.bracket_hi, cfg.tolerance,
        cfg.params, grid,
        max_iterations=cfg.max_iterations,
        sample_every=cfg.sample_every, window=cfg.window,
        allow_unstable_tau=cfg.allow_unstable_tau,
    )
    print(
        f"critical {result.parameter_name} in [{result.lower:.6g}, "
        f"{result.upper:.6g}] after {result.iterations} iterations "
        f"({result.simulations} simulations)"
    )
    path = csvio.write_bisection(result, _outdir(cfg, args.out) / "bisection.csv")
    print(path)
    return 0


def cmd_convergence(args) -> int:
    cfg = _load_config(args.config, "convergence")
    _warn_hypotheses(cfg)
    levels = convergence_mod.convergence_study(cfg)
    rows = [
        {
            "M": lv.M, "h": lv.h, "tau": lv.tau, "steps": lv.steps,
            "diff_sup": lv.diff_sup, "order": lv.order,
        }
        for lv in levels
    ]
    path = csvio.write_convergence(rows, _outdir(cfg, args.out) / "convergence.csv")
    for lv in levels:
        order = f"{lv.order:.3f}" if lv.order is not None else "-"
        diff = f"{lv.diff_sup:.3e}" if lv.diff_sup is not None else "-"
        print(f"M={lv.M:6d} tau={lv.tau:.3e} diff_to_finer={diff} order={order}")
    print(path)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chemofront",
        description="Front-fixing solver for the chemotaxis free-boundary system",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("simulate", help="single run from a config file")
    sp.add_argument("--config", required=True)
    sp.add_argument("--out", default=None, help="output directory override")
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("preset", help="run a published experiment by id")
    sp.add_argument("id", help="preset id, e.g. ex3_1 or table3_11")
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_preset)

    sp = sub.add_parser("sweep", help="parameter sweep from a config file")
    sp.add_argument("--config", required=True)
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("bisect", help="critical-parameter bisection")
    sp.add_argument("--config", required=True)
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_bisect)

    sp = sub.add_parser("convergence", help="grid-refinement study")
    sp.add_argument("--config", required=True)
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_convergence)
    return parser


VALIDATION_ERRORS = (
    ConfigError,
    InvalidArgument,
    BracketError,
    UnknownPreset,
    InsufficientData,
    HypothesisViolation,
    BudgetExceeded,
)
NUMERICAL_ERRORS = (NonFiniteAbort, SingularSystem)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.func(args)
    except VALIDATION_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except NUMERICAL_ERRORS as exc:
        print(f"numerical abort: {exc}", file=sys.stderr)
        return 2
    except ChemoFrontError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

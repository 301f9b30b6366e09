"""Hard-coded experiment presets and their artifact emission.

Each preset reproduces one published experiment: dichotomy runs, the
critical-speed bisection, single table columns, and the four speed tables.
All share a = 2, b = 1 and the cosine initial hump.  Grid sizes, horizons,
and time steps are chosen here (the experiments themselves do not pin
them); every preset uses tau = 0.45*g0*h^2, i.e. 90% of the explicit
diffusion cap, with the positivity-bound override that entails.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from . import csvio, dynamics, plotting
from .errors import UnknownPreset
from .grid import build_grid
from .model import ModelParams
from .stepper import run

__all__ = ["PresetSpec", "PRESETS", "preset_ids", "run_preset"]

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class PresetSpec:
    kind: str  # run | sweep | bisect
    params: ModelParams
    M: int
    T: float
    description: str
    sample_every: float = 0.05
    snapshot_count: int = 5
    axis: str | None = None
    values: tuple[float, ...] = ()
    report_times: tuple[float, ...] = ()
    bracket: tuple[float, float] | None = None
    tolerance: float = 0.005

    def tau(self) -> float:
        """90% of the explicit diffusion cap for the smallest initial habitat."""
        h0 = self.params.h0
        if self.axis == "h0" and self.values:
            h0 = min(self.values)
        return 0.45 * h0 * h0 / (self.M * self.M)

    def grid(self):
        return build_grid(self.M, self.tau(), self.T)


def _p(chi1, chi2, nu, lambda1, lambda2, mu1, mu2, sigma=1.0, h0=1.0) -> ModelParams:
    return ModelParams(a=2.0, b=1.0, chi1=chi1, chi2=chi2, lambda1=lambda1,
                       lambda2=lambda2, mu1=mu1, mu2=mu2, nu=nu, sigma=sigma, h0=h0)


TABLE_TIMES = tuple(float(t) for t in range(1, 11))
SIGMA_VALUES = (0.01, 0.1, 1.0, 2.0, 4.0)
H0_VALUES = (1.0, 1.2, 1.5, 2.0, 3.0, 5.0)

PRESETS: dict[str, PresetSpec] = {
    "ex3_1": PresetSpec(
        kind="run", M=120, T=50.0, sample_every=0.1,
        params=_p(0.02, 0.01, 0.01, 2, 1, 2, 1, h0=2.5),
        description="weak chemo, slow front: spreading from a long habitat",
    ),
    "ex3_2": PresetSpec(
        kind="run", M=100, T=20.0,
        params=_p(2, 1, 0.8, 1, 2, 1, 2, h0=0.5),
        description="strong chemo, short habitat: vanishing",
    ),
    "ex3_3": PresetSpec(
        kind="run", M=120, T=20.0,
        params=_p(2, 1, 0.8, 1, 2, 1, 2, h0=2.5),
        description="strong chemo, long habitat: spreading",
    ),
    "ex3_4": PresetSpec(
        kind="run", M=120, T=20.0,
        params=_p(0.2, 0.1, 2, 1, 2, 1, 2, h0=1.0),
        description="short habitat, fast front: spreading",
    ),
    "ex3_5": PresetSpec(
        kind="run", M=100, T=20.0,
        params=_p(0.2, 0.1, 0.01, 1, 2, 1, 2, h0=1.0),
        description="short habitat, slow front: vanishing",
    ),
    "ex3_6": PresetSpec(
        kind="bisect", M=100, T=50.0, sample_every=0.25,
        params=_p(0.2, 0.1, 0.0375, 1, 2, 1, 2, h0=1.0),
        bracket=(0.025, 0.05), tolerance=0.005,
        description="bisection for the critical front-speed coefficient",
    ),
    "ex3_7": PresetSpec(
        kind="run", M=120, T=20.0,
        params=_p(0.2, 0.1, 0.8, 1, 2, 1, 2, sigma=4.0, h0=1.0),
        description="large initial amplitude: spreading",
    ),
    "ex3_8": PresetSpec(
        kind="run", M=100, T=20.0,
        params=_p(0.2, 0.1, 0.8, 1, 2, 1, 2, sigma=0.01, h0=1.0),
        description="small initial amplitude: vanishing",
    ),
    "ex3_9": PresetSpec(
        kind="run", M=160, T=20.0,
        params=_p(0.2, 0.1, 2, 1, 2, 1, 2, h0=2.0),
        description="fast front from a long habitat: spreading",
    ),
    "ex3_10": PresetSpec(
        kind="run", M=120, T=30.0, sample_every=0.1,
        params=_p(0.2, 0.1, 0.01, 1, 2, 1, 2, h0=2.0),
        description="slow front from a long habitat: spreading, low speed",
    ),
    "ex3_11": PresetSpec(
        kind="run", M=200, T=10.0, sample_every=0.02,
        params=_p(0.2, 0.1, 0.8, 1, 2, 1, 2, h0=2.0),
        description="speed-table base column (sigma = 1)",
    ),
    "ex3_12": PresetSpec(
        kind="run", M=200, T=10.0, sample_every=0.02,
        params=_p(0.0, 0.0, 0.8, 1, 2, 1, 2, h0=2.0),
        description="speed-table base column without chemotaxis",
    ),
    "ex3_13": PresetSpec(
        kind="run", M=200, T=10.0, sample_every=0.02,
        params=_p(0.2, 0.1, 0.8, 1, 2, 1, 2, h0=2.0),
        description="habitat-length table base column (h0 = 2)",
    ),
    "ex3_14": PresetSpec(
        kind="run", M=200, T=10.0, sample_every=0.02,
        params=_p(0.0, 0.0, 0.8, 1, 2, 1, 2, h0=2.0),
        description="habitat-length table base column without chemotaxis",
    ),
    "ex3_15": PresetSpec(
        kind="run", M=200, T=50.0, sample_every=0.1,
        params=_p(0.2, 0.1, 0.8, 2, 1, 2, 1, h0=2.5),
        description="fast-decaying attractant: spreading, drifting plateau",
    ),
    "ex3_16": PresetSpec(
        kind="run", M=200, T=50.0, sample_every=0.1,
        params=_p(0.2, 0.1, 0.8, 2, 1, 1, 2, h0=2.5),
        description="spreading with plateau at the logistic equilibrium",
    ),
    "ex3_16_variant": PresetSpec(
        kind="run", M=200, T=50.0, sample_every=0.1,
        params=_p(0.2, 0.1, 0.8, 1, 2, 2, 1, h0=2.5),
        description="slow-decaying attractant: plateau away from equilibrium",
    ),
    "table3_11": PresetSpec(
        kind="sweep", M=200, T=10.0, sample_every=0.02,
        params=_p(0.2, 0.1, 0.8, 1, 2, 1, 2, h0=2.0),
        axis="sigma", values=SIGMA_VALUES, report_times=TABLE_TIMES,
        description="front speed vs initial amplitude",
    ),
    "table3_12": PresetSpec(
        kind="sweep", M=200, T=10.0, sample_every=0.02,
        params=_p(0.0, 0.0, 0.8, 1, 2, 1, 2, h0=2.0),
        axis="sigma", values=SIGMA_VALUES, report_times=TABLE_TIMES,
        description="front speed vs initial amplitude, no chemotaxis",
    ),
    "table3_13": PresetSpec(
        kind="sweep", M=200, T=10.0, sample_every=0.02,
        params=_p(0.2, 0.1, 0.8, 1, 2, 1, 2, h0=2.0),
        axis="h0", values=H0_VALUES, report_times=TABLE_TIMES,
        description="front speed vs initial habitat length",
    ),
    "table3_14": PresetSpec(
        kind="sweep", M=200, T=10.0, sample_every=0.02,
        params=_p(0.0, 0.0, 0.8, 1, 2, 1, 2, h0=2.0),
        axis="h0", values=H0_VALUES, report_times=TABLE_TIMES,
        description="front speed vs initial habitat length, no chemotaxis",
    ),
}


def preset_ids() -> list[str]:
    return sorted(PRESETS)


def run_preset(preset_id: str, output_dir=None) -> list[Path]:
    """Execute one preset and write its artifacts; returns written paths.

    Run presets emit the time series CSV, snapshot CSVs, a speed plot and a
    density plot.  Sweep presets emit the speed table CSV and plot; the
    bisect preset emits the bracket CSV plus the front evolution of both
    final bracket endpoints.
    """
    if preset_id not in PRESETS:
        raise UnknownPreset(
            f"unknown preset {preset_id!r}; available: {', '.join(preset_ids())}"
        )
    spec = PRESETS[preset_id]
    outdir = csvio.resolve_outdir(output_dir if output_dir is not None else "out") / preset_id
    grid = spec.grid()
    written: list[Path] = []
    log.info("preset %s: %s", preset_id, spec.description)

    if spec.kind == "run":
        snap_times = [spec.T * k / (spec.snapshot_count - 1) for k in range(spec.snapshot_count)]
        traj = run(spec.params, grid, sample_every=spec.sample_every,
                   snapshot_times=snap_times, allow_unstable_tau=True)
        written.append(csvio.write_timeseries(traj, outdir / "timeseries.csv"))
        for snap in traj.snapshots:
            written.append(
                csvio.write_snapshot(snap, outdir / f"snapshot_t{snap.t:.6g}.csv")
            )
        written.append(
            plotting.emit_plot(
                [
                    plotting.PlotSeries("h(t)/t", traj.t, traj.h_over_t),
                    plotting.PlotSeries("dh/dt", traj.t, traj.dh_dt),
                ],
                outdir / "speed.svg",
                title=f"{preset_id}: front speed",
                xlabel="t",
                ylabel="speed",
            )
        )
        written.append(
            plotting.emit_plot(
                [
                    plotting.PlotSeries(f"t={snap.t:.6g}", snap.x, snap.w)
                    for snap in traj.snapshots
                ],
                outdir / "density.svg",
                title=f"{preset_id}: density profiles",
                xlabel="x",
                ylabel="u",
            )
        )
        outcome = dynamics.classify(traj, spec.params)
        outcome_path = outdir / "outcome.txt"
        outcome_path.write_text(
            "\n".join(
                [outcome.kind, f"final_h = {outcome.final_h!r}",
                 f"final_sup_w = {outcome.final_sup_w!r}",
                 f"speed = {outcome.speed!r}", outcome.evidence]
            ) + "\n",
            encoding="utf-8",
        )
        written.append(outcome_path)
    elif spec.kind == "sweep":
        table = dynamics.sweep(spec.params, grid, spec.axis, list(spec.values),
                               list(spec.report_times),
                               sample_every=spec.sample_every)
        written.append(csvio.write_table(table, outdir / "table.csv"))
        written.append(
            plotting.emit_plot(
                [
                    plotting.PlotSeries(
                        f"{spec.axis}={v:g}",
                        np.asarray(table.report_times),
                        table.speeds[:, j],
                    )
                    for j, v in enumerate(table.values)
                ],
                outdir / "table.svg",
                title=f"{preset_id}: trailing front speed",
                xlabel="T",
                ylabel="dh/dt",
            )
        )
    elif spec.kind == "bisect":
        lo, hi = spec.bracket
        result = dynamics.bisect_critical(
            "nu", lo, hi, spec.tolerance, spec.params, grid,
            sample_every=spec.sample_every,
        )
        written.append(csvio.write_bisection(result, outdir / "bisection.csv"))
        series = []
        for label, value in (("lower", result.lower), ("upper", result.upper)):
            traj = run(replace(spec.params, nu=value), grid,
                       sample_every=spec.sample_every, allow_unstable_tau=True)
            series.append(plotting.PlotSeries(f"nu={value:.6g} ({label})", traj.t, traj.h))
            written.append(
                csvio.write_timeseries(traj, outdir / f"timeseries_{label}.csv")
            )
        written.append(
            plotting.emit_plot(
                series, outdir / "front.svg",
                title=f"{preset_id}: habitat length at the bracket ends",
                xlabel="t", ylabel="h(t)",
            )
        )
    return written

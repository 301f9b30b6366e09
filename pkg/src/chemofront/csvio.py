"""CSV emission for time series, snapshots, sweep tables, and study reports.

All numbers are written with repr (shortest round-trip double, dot decimal
separator), so identical inputs produce byte-identical files.
"""

from __future__ import annotations

import os
from pathlib import Path

from .dynamics import BisectionResult, SweepTable
from .stepper import Snapshot, Trajectory

__all__ = [
    "write_timeseries",
    "write_snapshot",
    "write_table",
    "write_bisection",
    "write_convergence",
]

TIMESERIES_HEADER = "t,h,h_over_t,dh_dt,sup_w,w_at_0"
SNAPSHOT_HEADER = "z,x,w,v1,v2"


def _fmt(x) -> str:
    return repr(float(x))


def _write(path, lines: list[str]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def write_timeseries(traj: Trajectory, path) -> Path:
    lines = [TIMESERIES_HEADER]
    for i in range(len(traj.t)):
        lines.append(
            ",".join(
                _fmt(v)
                for v in (
                    traj.t[i],
                    traj.h[i],
                    traj.h_over_t[i],
                    traj.dh_dt[i],
                    traj.sup_w[i],
                    traj.w0[i],
                )
            )
        )
    return _write(path, lines)


def write_snapshot(snap: Snapshot, path) -> Path:
    lines = [SNAPSHOT_HEADER]
    for i in range(len(snap.z)):
        lines.append(
            ",".join(_fmt(v) for v in (snap.z[i], snap.x[i], snap.w[i], snap.V1[i], snap.V2[i]))
        )
    return _write(path, lines)


def write_table(table: SweepTable, path) -> Path:
    header = "T," + ",".join(f"{table.axis}={v:g}" for v in table.values)
    lines = [header]
    for i, t_rep in enumerate(table.report_times):
        lines.append(",".join([_fmt(t_rep)] + [_fmt(s) for s in table.speeds[i]]))
    for jv, msg in sorted(table.errors.items()):
        lines.append(f"# column {table.axis}={table.values[jv]:g} failed: {msg}")
    return _write(path, lines)


def write_bisection(result: BisectionResult, path) -> Path:
    lines = [
        "parameter,lower,upper,iterations,simulations,outcome_at_lower,outcome_at_upper",
        ",".join(
            [
                result.parameter_name,
                _fmt(result.lower),
                _fmt(result.upper),
                str(result.iterations),
                str(result.simulations),
                result.outcomes_at_bounds[0],
                result.outcomes_at_bounds[1],
            ]
        ),
    ]
    if result.notes:
        lines.append(f"# {result.notes}")
    return _write(path, lines)


def write_convergence(rows: list[dict], path) -> Path:
    lines = ["M,h,tau,steps,diff_sup,order"]
    for row in rows:
        lines.append(
            ",".join(
                [
                    str(row["M"]),
                    _fmt(row["h"]),
                    _fmt(row["tau"]),
                    str(row["steps"]),
                    _fmt(row["diff_sup"]) if row["diff_sup"] is not None else "",
                    _fmt(row["order"]) if row["order"] is not None else "",
                ]
            )
        )
    return _write(path, lines)


def output_root(default: str = ".") -> Path:
    """Directory under which relative output paths are resolved.

    Controlled by the CHEMOFRONT_OUTPUT_ROOT environment variable.
    """
    return Path(os.environ.get("CHEMOFRONT_OUTPUT_ROOT", default))


def resolve_outdir(output_dir: str) -> Path:
    p = Path(output_dir)
    return p if p.is_absolute() else output_root() / p

"""Outcome classification, speed estimation, critical-parameter bisection,
and parameter sweeps.

A finished run either spreads (front well past the critical length and
still moving), vanishes (density below threshold and front stalled), or is
undecided (horizon too short).  Bisection brackets the critical value of nu
or sigma between a vanishing and a spreading run; sweeps tabulate the
trailing front speed at a list of report times, one column per parameter
value.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import BracketError, BudgetExceeded, InsufficientData, InvalidArgument
from .grid import GridSpec
from .model import ModelParams, critical_length
from .stepper import Trajectory, run

__all__ = [
    "ClassifyThresholds",
    "Outcome",
    "BisectionResult",
    "SweepTable",
    "classify",
    "spreading_speed",
    "speed_at",
    "bisect_critical",
    "sweep",
]

log = logging.getLogger(__name__)

SPREADING = "Spreading"
VANISHING = "Vanishing"
UNDECIDED = "Undecided"


@dataclass(frozen=True)
class ClassifyThresholds:
    """Decision thresholds; defaults classify all published experiments.

    kappa_s    spreading when h(T) > kappa_s * critical length
    eps_speed  ... and trailing speed exceeds eps_speed
    eps_v      vanishing when sup w(T) < eps_v
    eps_g      ... and trailing speed is below eps_g
    """

    kappa_s: float = 2.0
    eps_v: float = 1e-3
    eps_g: float = 1e-4
    eps_speed: float = 1e-3


@dataclass(frozen=True)
class Outcome:
    kind: str
    final_h: float
    final_sup_w: float
    speed: float | None
    evidence: str


@dataclass(frozen=True)
class BisectionResult:
    parameter_name: str
    lower: float
    upper: float
    iterations: int
    outcomes_at_bounds: tuple[str, str]
    simulations: int
    notes: str = ""
    worst_mp_excess: float = -math.inf  # over every chemical solve performed
    history: tuple = ()  # (value, outcome kind) for every evaluation, in order


@dataclass
class SweepTable:
    """Speeds[i][j]: trailing speed at report_times[i] for values[j]."""

    axis: str
    values: list[float]
    report_times: list[float]
    speeds: np.ndarray
    errors: dict[int, str]
    worst_mp_excess: float = -math.inf  # over every chemical solve performed


def _trailing_speed(traj: Trajectory) -> float:
    """Last windowed slope; falls back to (h(T)-h(0))/T on short runs."""
    s = traj.dh_dt[-1]
    if np.isnan(s):
        t_span = traj.t[-1] - traj.t[0]
        return float((traj.h[-1] - traj.h[0]) / t_span) if t_span > 0 else 0.0
    return float(s)


def classify(
    traj: Trajectory,
    p: ModelParams,
    thresholds: ClassifyThresholds | None = None,
) -> Outcome:
    """Decide Spreading / Vanishing / Undecided from a finished trajectory."""
    if len(traj.t) == 0:
        raise InvalidArgument("empty trajectory")
    th = thresholds or ClassifyThresholds()
    lstar = critical_length(p.a)
    final_h = float(traj.h[-1])
    final_sup = float(traj.sup_w[-1])
    speed = _trailing_speed(traj)

    if final_h > th.kappa_s * lstar and speed > th.eps_speed:
        return Outcome(
            kind=SPREADING,
            final_h=final_h,
            final_sup_w=final_sup,
            speed=speed,
            evidence=(
                f"h(T)={final_h:.4f} > {th.kappa_s:g}*l*={th.kappa_s * lstar:.4f} "
                f"and trailing speed {speed:.4g} > {th.eps_speed:g}"
            ),
        )
    if final_sup < th.eps_v and speed < th.eps_g:
        return Outcome(
            kind=VANISHING,
            final_h=final_h,
            final_sup_w=final_sup,
            speed=speed,
            evidence=(
                f"sup w(T)={final_sup:.3e} < {th.eps_v:g}, trailing speed "
                f"{speed:.3e} < {th.eps_g:g}; final h {final_h:.4f} vs "
                f"critical length {lstar:.4f}"
            ),
        )
    return Outcome(
        kind=UNDECIDED,
        final_h=final_h,
        final_sup_w=final_sup,
        speed=speed,
        evidence=(
            f"h(T)={final_h:.4f}, sup w(T)={final_sup:.3e}, speed {speed:.4g}: "
            "neither spreading nor vanishing thresholds met (horizon too short?)"
        ),
    )


def speed_at(traj: Trajectory, t: float, window: float = 1.0) -> float:
    """Windowed slope (h(t) - h(t-window))/window from the sampled series."""
    if len(traj.t) < 2:
        raise InsufficientData("trajectory has fewer than two samples")
    if t - window < traj.t[0] - 1e-9 or t > traj.t[-1] + 1e-9:
        raise InsufficientData(
            f"window [{t - window:g}, {t:g}] outside sampled range "
            f"[{traj.t[0]:g}, {traj.t[-1]:g}]"
        )
    h_now = float(np.interp(t, traj.t, traj.h))
    h_back = float(np.interp(t - window, traj.t, traj.h))
    return (h_now - h_back) / window


def spreading_speed(traj: Trajectory, window: float = 1.0) -> float:
    """Trailing windowed slope of the front at the end of the trajectory."""
    return speed_at(traj, float(traj.t[-1]), window)


def _with_value(base: ModelParams, name: str, value: float) -> ModelParams:
    if not hasattr(base, name):
        raise InvalidArgument(f"unknown parameter {name!r}")
    return replace(base, **{name: value})


def bisect_critical(
    which: str,
    lo: float,
    hi: float,
    tol: float,
    base: ModelParams,
    grid: GridSpec,
    thresholds: ClassifyThresholds | None = None,
    max_iterations: int = 20,
    sample_every: float = 0.25,
    window: float = 1.0,
    allow_unstable_tau: bool = True,
) -> BisectionResult:
    """Bracket the critical parameter value between vanishing and spreading.

    Requires classify at lo to be Vanishing and at hi Spreading.  Midpoint
    runs that come back Undecided are retried once with a doubled horizon;
    a still-undecided run counts as Spreading when the density survives
    (sup w >= eps_v), else Vanishing.
    """
    if which not in ("nu", "sigma"):
        raise InvalidArgument(f"bisection parameter must be nu or sigma, got {which!r}")
    if not tol > 0:
        raise InvalidArgument(f"tol must be > 0, got {tol}")
    if not lo <= hi:
        raise BracketError(f"need lo <= hi, got lo={lo}, hi={hi}")
    th = thresholds or ClassifyThresholds()
    if lo == hi:
        return BisectionResult(
            parameter_name=which,
            lower=lo,
            upper=hi,
            iterations=0,
            outcomes_at_bounds=(UNDECIDED, UNDECIDED),
            simulations=0,
            notes="degenerate bracket returned unchanged",
        )

    simulations = 0
    worst_mp = -math.inf
    notes = []
    history = []

    def outcome_at(value: float) -> Outcome:
        nonlocal simulations, worst_mp
        p = _with_value(base, which, value)
        traj = run(p, grid, sample_every=sample_every, window=window,
                   allow_unstable_tau=allow_unstable_tau)
        simulations += 1
        worst_mp = max(worst_mp, traj.diagnostics.mp_excess_v1,
                       traj.diagnostics.mp_excess_v2)
        out = classify(traj, p, th)
        if out.kind == UNDECIDED:
            extended = GridSpec(M=grid.M, tau=grid.tau, T=2.0 * grid.T)
            traj = run(p, extended, sample_every=sample_every, window=window,
                       allow_unstable_tau=allow_unstable_tau)
            simulations += 1
            worst_mp = max(worst_mp, traj.diagnostics.mp_excess_v1,
                           traj.diagnostics.mp_excess_v2)
            out = classify(traj, p, th)
            if out.kind == UNDECIDED:
                trend = SPREADING if out.final_sup_w >= th.eps_v else VANISHING
                notes.append(
                    f"{which}={value:g} undecided after horizon doubling; "
                    f"counted as {trend} by dominant trend"
                )
                out = replace(out, kind=trend)
            else:
                notes.append(f"{which}={value:g} needed a doubled horizon")
        history.append((value, out.kind))
        return out

    out_lo = outcome_at(lo)
    out_hi = outcome_at(hi)
    if out_lo.kind != VANISHING or out_hi.kind != SPREADING:
        raise BracketError(
            f"bracket invalid: {which}={lo:g} -> {out_lo.kind}, "
            f"{which}={hi:g} -> {out_hi.kind} (need Vanishing/Spreading)"
        )

    iterations = 0
    while hi - lo > tol:
        if iterations >= max_iterations:
            raise BudgetExceeded(
                f"bracket width {hi - lo:g} > tol {tol:g} after "
                f"{max_iterations} iterations"
            )
        mid = 0.5 * (lo + hi)
        out_mid = outcome_at(mid)
        iterations += 1
        if out_mid.kind == VANISHING:
            lo, out_lo = mid, out_mid
        else:
            hi, out_hi = mid, out_mid
        log.info("bisection %s: [%g, %g] after %d iterations", which, lo, hi, iterations)

    return BisectionResult(
        parameter_name=which,
        lower=lo,
        upper=hi,
        iterations=iterations,
        outcomes_at_bounds=(out_lo.kind, out_hi.kind),
        simulations=simulations,
        notes="; ".join(notes),
        worst_mp_excess=worst_mp,
        history=tuple(history),
    )


def sweep(
    base: ModelParams,
    grid: GridSpec,
    axis: str,
    values: list[float],
    report_times: list[float],
    sample_every: float = 0.02,
    window: float = 1.0,
    allow_unstable_tau: bool = True,
) -> SweepTable:
    """Run once per value and tabulate trailing speeds at the report times.

    Failures are recorded per cell (column of NaNs plus a message) without
    aborting the remaining values.
    """
    if not values:
        raise InvalidArgument("values must be nonempty")
    if not report_times:
        raise InvalidArgument("report_times must be nonempty")
    if not hasattr(base, axis):
        raise InvalidArgument(f"unknown parameter {axis!r}")
    speeds = np.full((len(report_times), len(values)), np.nan)
    errors: dict[int, str] = {}
    worst_mp = -math.inf
    for jv, value in enumerate(values):
        try:
            p = _with_value(base, axis, value)
            traj = run(p, grid, sample_every=sample_every, window=window,
                       allow_unstable_tau=allow_unstable_tau)
            worst_mp = max(worst_mp, traj.diagnostics.mp_excess_v1,
                           traj.diagnostics.mp_excess_v2)
            for it, t_rep in enumerate(report_times):
                speeds[it, jv] = speed_at(traj, t_rep, window)
        except Exception as exc:  # per-cell isolation is the contract
            errors[jv] = f"{type(exc).__name__}: {exc}"
            log.warning("sweep cell %s=%g failed: %s", axis, value, exc)
    return SweepTable(
        axis=axis,
        values=list(values),
        report_times=list(report_times),
        speeds=speeds,
        errors=errors,
        worst_mp_excess=worst_mp,
    )

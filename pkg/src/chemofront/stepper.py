"""Explicit time stepping of the front-fixed system and the run loop.

One step, starting from chemicals consistent with (w, g):

    1. increment of the squared front length from the one-sided density
       gradient at the front (g fixed to the current value inside the step),
    2. explicit update of the density through the three-point stencil
       coefficients, with the fictitious reflected node at z = 0,
    3. both chemical fields re-solved from the new density before the next
       step.

The update at node j (z_j = j*h, interior and j = 0 with reflection) is

    w'_j = a_j*w_{j-1} + b_j*w_j + c_j*w_{j+1}

    a_j = (tau/h^2) * (1/g - (z_j*nu*dwf + S1)/(4g))
    b_j = 1 - 2*tau/(g*h^2) + S2*tau + S3*tau*w_j
    c_j = (tau/h^2) * (1/g + (z_j*nu*dwf + S1)/(4g))

with dwf = 4*w_{M-1} - w_{M-2} and the chemo terms S1, S2, S3 from
chemo_terms below.  The combined advection coefficient (front drift plus
chemical drift) enters antisymmetrically, exactly as a centered first
difference must.

run() drives whole simulations through the selected kernel backend and
records a sampled Trajectory plus run-level diagnostics (positivity,
stencil-coefficient minima, sup-norm envelope, discrete maximum principle).
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels, elliptic
from .errors import InvalidArgument, NonFiniteAbort
from .grid import GridSpec, SimState, sample_initial
from .model import ModelParams, envelope_rate, max_stable_timestep

__all__ = [
    "StepDiagnostics",
    "RunDiagnostics",
    "Snapshot",
    "Trajectory",
    "chemo_terms",
    "stefan_increment",
    "step",
    "run",
]

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class StepDiagnostics:
    """Per-step health record; positivity_ok means all stencil weights >= 0."""

    min_w: float
    max_w: float
    front_increment: float
    min_coeff_a: float
    min_coeff_b: float
    min_coeff_c: float

    @property
    def positivity_ok(self) -> bool:
        return self.min_coeff_a >= 0 and self.min_coeff_b >= 0 and self.min_coeff_c >= 0


@dataclass
class RunDiagnostics:
    """Aggregated over a whole run."""

    steps_total: int = 0
    min_w: float = math.inf
    max_w: float = -math.inf
    min_coeff_a: float = math.inf
    min_coeff_b: float = math.inf
    min_coeff_c: float = math.inf
    first_negative_step: int = -1
    min_front_increment: float = math.inf
    max_env_excess: float = -math.inf
    mp_excess_v1: float = -math.inf
    mp_excess_v2: float = -math.inf
    backend: str = ""
    warnings: list[str] = field(default_factory=list)

    def merge(self, d: dict) -> None:
        self.steps_total += d["steps_done"]
        self.min_w = min(self.min_w, d["min_w"])
        self.max_w = max(self.max_w, d["max_w"])
        self.min_coeff_a = min(self.min_coeff_a, d["min_coeff_a"])
        self.min_coeff_b = min(self.min_coeff_b, d["min_coeff_b"])
        self.min_coeff_c = min(self.min_coeff_c, d["min_coeff_c"])
        if self.first_negative_step < 0:
            self.first_negative_step = d["first_negative_step"]
        self.min_front_increment = min(self.min_front_increment, d["min_front_increment"])
        self.max_env_excess = max(self.max_env_excess, d["max_env_excess"])
        self.mp_excess_v1 = max(self.mp_excess_v1, d["mp_excess_v1"])
        self.mp_excess_v2 = max(self.mp_excess_v2, d["mp_excess_v2"])


@dataclass(frozen=True)
class Snapshot:
    t: float
    z: np.ndarray
    x: np.ndarray
    w: np.ndarray
    V1: np.ndarray
    V2: np.ndarray


@dataclass
class Trajectory:
    """Sampled time series of a run; dh_dt is the trailing windowed slope."""

    t: np.ndarray
    h: np.ndarray
    h_over_t: np.ndarray
    dh_dt: np.ndarray
    sup_w: np.ndarray
    w0: np.ndarray
    snapshots: list[Snapshot]
    final_state: SimState
    diagnostics: RunDiagnostics
    window: float


def chemo_terms(j: int, V1: np.ndarray, V2: np.ndarray, p: ModelParams) -> tuple[float, float, float]:
    """Chemical source terms at node j for the explicit update.

    S1 is the centered difference combination feeding the drift, S2 the
    linear growth modification, S3 the quadratic coefficient.  At j = 0 the
    zero-flux reflection makes S1 vanish identically.
    """
    M = len(V1) - 1
    if not 0 <= j <= M - 1:
        raise InvalidArgument(f"j must be in [0, {M - 1}], got {j}")
    if j == 0:
        s1 = 0.0
    else:
        s1 = -p.chi1 * (V1[j + 1] - V1[j - 1]) + p.chi2 * (V2[j + 1] - V2[j - 1])
    s2 = -p.chi1 * p.lambda1 * V1[j] + p.chi2 * p.lambda2 * V2[j] + p.a
    s3 = p.chi1 * p.mu1 - p.chi2 * p.mu2 - p.b
    return float(s1), float(s2), s3


def stefan_increment(s: SimState, p: ModelParams, grid: GridSpec) -> float:
    """Increment of g over one step: (tau*nu/h)*(4*w_{M-1} - w_{M-2})."""
    M = grid.M
    return grid.tau * p.nu / grid.h * (4.0 * s.w[M - 1] - s.w[M - 2])


def step(s: SimState, p: ModelParams, grid: GridSpec) -> tuple[SimState, StepDiagnostics]:
    """One explicit step; requires s.V1/s.V2 solved for the current (w, g).

    Returns the new state (fresh arrays, chemicals re-solved for it) and the
    step diagnostics.  Raises NonFiniteAbort if the update produces NaN/inf;
    negative stencil coefficients are only recorded.
    """
    M = grid.M
    h = grid.h
    tau = grid.tau
    w, V1, V2, g = s.w, s.V1, s.V2, s.g

    dwf = 4.0 * w[M - 1] - w[M - 2]
    dg = tau * p.nu / h * dwf

    z = np.arange(M) * h
    s1 = np.empty(M)
    s1[0] = 0.0
    s1[1:] = -p.chi1 * (V1[2 : M + 1] - V1[0 : M - 1]) + p.chi2 * (
        V2[2 : M + 1] - V2[0 : M - 1]
    )
    s2 = -p.chi1 * p.lambda1 * V1[:M] + p.chi2 * p.lambda2 * V2[:M] + p.a
    s3 = p.chi1 * p.mu1 - p.chi2 * p.mu2 - p.b

    wm = np.empty(M)
    wm[0] = w[1]
    wm[1:] = w[0 : M - 1]
    inv_g = 1.0 / g
    tau_h2 = tau / (h * h)
    wn = np.empty(M + 1)
    with np.errstate(over="ignore", invalid="ignore"):
        adv = (z * p.nu * dwf + s1) / (4.0 * g)
        aj = tau_h2 * (inv_g - adv)
        cj = tau_h2 * (inv_g + adv)
        bj = 1.0 - 2.0 * tau_h2 * inv_g + s2 * tau + s3 * tau * w[:M]
        wn[:M] = aj * wm + bj * w[:M] + cj * w[1 : M + 1]
    wn[M] = 0.0

    g_new = g + dg
    if not (np.all(np.isfinite(wn)) and math.isfinite(g_new) and g_new > 0):
        raise NonFiniteAbort(s.n + 1)

    out = SimState(
        g=g_new,
        w=wn,
        V1=elliptic.solve_chemical(p.lambda1, p.mu1, g_new, wn, h),
        V2=elliptic.solve_chemical(p.lambda2, p.mu2, g_new, wn, h),
        n=s.n + 1,
        t=(s.n + 1) * tau,
    )
    diag = StepDiagnostics(
        min_w=float(np.min(wn)),
        max_w=float(np.max(wn)),
        front_increment=dg,
        min_coeff_a=float(np.min(aj)),
        min_coeff_b=float(np.min(bj)),
        min_coeff_c=float(np.min(cj)),
    )
    return out, diag


def run(
    p: ModelParams,
    grid: GridSpec,
    sample_every: float = 0.1,
    snapshot_times: list[float] | None = None,
    window: float = 1.0,
    allow_unstable_tau: bool = False,
    backend: str | None = None,
) -> Trajectory:
    """Simulate up to t >= T, sampling every sample_every time units.

    grid.tau must not exceed the positivity bound unless allow_unstable_tau
    is set (the published experiments all need the override; the bound is
    exponentially conservative in T).  Aborts on non-finite values; records
    positivity/envelope/monotonicity violations in the diagnostics without
    stopping.
    """
    if not sample_every > 0:
        raise InvalidArgument(f"sample_every must be > 0, got {sample_every}")
    state = sample_initial(p, grid)
    w0_norm = float(np.max(np.abs(state.w)))
    w0_front = float(state.w[grid.M - 1])

    tau_bound = max_stable_timestep(p, grid.h, state.g, grid.T, w0_norm, w0_front)
    diagnostics = RunDiagnostics(backend=backend or _kernels.BACKEND)
    if grid.tau > tau_bound:
        if not allow_unstable_tau:
            raise InvalidArgument(
                f"tau={grid.tau:g} exceeds the positivity bound {tau_bound:g}; "
                "pass allow_unstable_tau=True to override"
            )
        msg = (
            f"tau={grid.tau:g} above positivity bound {tau_bound:g}; "
            "positivity is monitored, not guaranteed"
        )
        diagnostics.warnings.append(msg)
        log.warning(msg)

    advance = _kernels.advance
    if backend is not None:
        backends = _kernels.available_backends()
        if backend not in backends:
            raise InvalidArgument(
                f"backend {backend!r} not available (have {sorted(backends)})"
            )
        advance = backends[backend]

    rate = envelope_rate(p, w0_norm)
    n_total = grid.steps_to(grid.T)
    k_max = int(math.floor(grid.T / sample_every + 1e-9))
    sample_steps = sorted(
        {grid.steps_to(k * sample_every) for k in range(k_max + 1)} | {0, n_total}
    )
    sample_steps = [n for n in sample_steps if n <= n_total]
    snapshot_steps = {}
    for t_snap in snapshot_times or []:
        if not 0 <= t_snap <= grid.T + 1e-9:
            raise InvalidArgument(f"snapshot time {t_snap} outside [0, T]")
        snapshot_steps.setdefault(min(grid.steps_to(t_snap), n_total), t_snap)

    events = sorted(set(sample_steps) | set(snapshot_steps))
    ts, hs, sups, w0s = [], [], [], []
    snapshots: list[Snapshot] = []

    def record_sample():
        ts.append(state.t)
        hs.append(state.front)
        sups.append(float(np.max(np.abs(state.w))))
        w0s.append(float(state.w[0]))

    def record_snapshot():
        z = grid.nodes()
        V1 = elliptic.solve_chemical(p.lambda1, p.mu1, state.g, state.w, grid.h)
        V2 = elliptic.solve_chemical(p.lambda2, p.mu2, state.g, state.w, grid.h)
        snapshots.append(
            Snapshot(
                t=state.t,
                z=z,
                x=z * state.front,
                w=state.w.copy(),
                V1=V1,
                V2=V2,
            )
        )

    for n_target in events:
        n_steps = n_target - state.n
        if n_steps > 0:
            d = advance(
                state.w, state.V1, state.V2, state.g, grid.tau, grid.h,
                state.n, n_steps,
                p.a, p.b, p.chi1, p.chi2, p.lambda1, p.lambda2, p.mu1, p.mu2,
                p.nu, rate, w0_norm,
            )
            state.g = d["g"]
            state.n += d["steps_done"]
            state.t = state.n * grid.tau
            diagnostics.merge(d)
            if d["nonfinite_step"] >= 0:
                raise NonFiniteAbort(d["nonfinite_step"])
        if n_target in snapshot_steps:
            record_snapshot()
        if n_target in sample_steps:
            record_sample()

    if diagnostics.first_negative_step >= 0:
        diagnostics.warnings.append(
            f"negative density first seen at step {diagnostics.first_negative_step}"
        )
    if diagnostics.min_front_increment < 0:
        diagnostics.warnings.append("front increment went negative (non-monotone g)")

    # chemicals consistent with the final density
    state.V1 = elliptic.solve_chemical(p.lambda1, p.mu1, state.g, state.w, grid.h)
    state.V2 = elliptic.solve_chemical(p.lambda2, p.mu2, state.g, state.w, grid.h)

    t_arr = np.asarray(ts)
    h_arr = np.asarray(hs)
    with np.errstate(divide="ignore", invalid="ignore"):
        h_over_t = np.where(t_arr > 0, h_arr / t_arr, np.nan)
    dh_dt = np.full_like(t_arr, np.nan)
    for i, ti in enumerate(t_arr):
        t_back = ti - window
        if t_back >= t_arr[0] - 1e-12:
            h_back = float(np.interp(t_back, t_arr, h_arr))
            dh_dt[i] = (h_arr[i] - h_back) / window
    return Trajectory(
        t=t_arr,
        h=h_arr,
        h_over_t=h_over_t,
        dh_dt=dh_dt,
        sup_w=np.asarray(sups),
        w0=np.asarray(w0s),
        snapshots=snapshots,
        final_state=state,
        diagnostics=diagnostics,
        window=window,
    )

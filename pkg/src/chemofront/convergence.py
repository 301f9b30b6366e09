"""Self-refinement convergence study.

No closed-form solution exists, so accuracy is checked by comparing runs at
successive grid doublings (shared nodes, sup norm) with tau scaled like h^2.
Each level's tau is nudged so the steps land exactly on T; otherwise the
O(tau) end-time mismatch between levels masks the second-order behaviour.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import RunConfig
from .errors import InvalidArgument
from .grid import build_grid
from .model import ModelParams
from .stepper import run

__all__ = ["ConvergenceLevel", "convergence_table", "convergence_study"]


@dataclass(frozen=True)
class ConvergenceLevel:
    M: int
    h: float
    tau: float
    steps: int
    diff_sup: float | None  # sup-norm difference to the next finer level
    order: float | None     # log2 ratio of consecutive diffs


def _tau_for_level(M: int, c_tau: float, T: float) -> tuple[float, int]:
    h = 1.0 / M
    target = c_tau * h * h
    steps = max(1, math.ceil(T / target - 1e-9))
    return T / steps, steps


def convergence_table(
    p: ModelParams,
    M_list: list[int],
    c_tau: float,
    T: float,
    allow_unstable_tau: bool = True,
    backend: str | None = None,
) -> list[ConvergenceLevel]:
    """Run every resolution in M_list and difference consecutive solutions.

    Consecutive entries must divide evenly (typically successive doublings);
    equal entries are allowed and give a zero difference.
    """
    if len(M_list) < 2:
        raise InvalidArgument("need at least two resolutions")
    if not c_tau > 0:
        raise InvalidArgument(f"c_tau must be > 0, got {c_tau}")
    solutions = []
    taus = []
    steps_list = []
    for M in M_list:
        tau, steps = _tau_for_level(M, c_tau, T)
        grid = build_grid(M, tau, T)
        traj = run(p, grid, sample_every=T, allow_unstable_tau=allow_unstable_tau,
                   backend=backend)
        solutions.append(traj.final_state.w)
        taus.append(tau)
        steps_list.append(steps)

    diffs: list[float | None] = []
    for coarse, fine, Mc, Mf in zip(solutions, solutions[1:], M_list, M_list[1:]):
        if Mf % Mc != 0:
            raise InvalidArgument(f"resolutions must nest: {Mc} does not divide {Mf}")
        stride = Mf // Mc
        diffs.append(float(np.max(np.abs(coarse - fine[::stride]))))
    diffs.append(None)

    orders: list[float | None] = [None]
    for d_prev, d_next in zip(diffs, diffs[1:]):
        if d_next is None or d_prev is None or d_next == 0 or d_prev == 0:
            orders.append(None)
        else:
            orders.append(math.log2(d_prev / d_next))
    # orders[i] estimates the order from diffs[i-1]/diffs[i]

    return [
        ConvergenceLevel(
            M=M_list[i],
            h=1.0 / M_list[i],
            tau=taus[i],
            steps=steps_list[i],
            diff_sup=diffs[i],
            order=orders[i],
        )
        for i in range(len(M_list))
    ]


def convergence_study(cfg: RunConfig, refinements: int | None = None) -> list[ConvergenceLevel]:
    """Grid-doubling study from a run configuration.

    Levels are M, 2M, 4M, ... (refinements+1 of them); tau scales like h^2
    with the ratio taken from cfg.tau, or 0.45*h0^2*h^2 when unset.
    """
    n_ref = cfg.refinements if refinements is None else refinements
    if n_ref < 2:
        raise InvalidArgument(f"refinements must be >= 2, got {n_ref}")
    M_list = [cfg.M * (2 ** k) for k in range(n_ref + 1)]
    if cfg.tau is not None:
        c_tau = cfg.tau * cfg.M * cfg.M
    else:
        c_tau = 0.45 * cfg.params.h0 ** 2
    return convergence_table(
        cfg.params, M_list, c_tau, cfg.T,
        allow_unstable_tau=True,
    )

"""Pure-NumPy time-stepping kernel (fallback backend).

Reference semantics for the compiled core: same update formulas, same
diagnostics.  Kept deliberately close to the per-operation functions in
the elliptic module, which it reuses for the chemical solves.
"""

from __future__ import annotations

import math

import numpy as np

from .. import elliptic

__all__ = ["advance"]


def advance(
    w: np.ndarray,
    v1: np.ndarray,
    v2: np.ndarray,
    g: float,
    tau: float,
    h: float,
    n0: int,
    n_steps: int,
    a: float,
    b: float,
    chi1: float,
    chi2: float,
    lam1: float,
    lam2: float,
    mu1: float,
    mu2: float,
    nu: float,
    env_rate: float,
    w0_norm: float,
) -> dict:
    """Run n_steps explicit steps in place; return new g plus diagnostics.

    Each step solves both chemical fields from the current (w, g), then
    applies the explicit update with the front increment folded in.
    """
    M = len(w) - 1
    z = np.arange(M) * h
    s3 = chi1 * mu1 - chi2 * mu2 - b
    s3tau = s3 * tau
    ratio1 = mu1 / lam1
    ratio2 = mu2 / lam2

    min_w = math.inf
    max_w = -math.inf
    min_a = math.inf
    min_b = math.inf
    min_c = math.inf
    min_dg = math.inf
    max_env_excess = -math.inf
    mp1 = -math.inf
    mp2 = -math.inf
    first_negative = -1
    nonfinite = -1
    steps_done = 0

    wn = np.empty_like(w)
    wm = np.empty(M)
    for k in range(n_steps):
        v1[:] = elliptic.solve_chemical(lam1, mu1, g, w, h)
        v2[:] = elliptic.solve_chemical(lam2, mu2, g, w, h)

        wmin = float(np.min(w))
        wmax = float(np.max(w))
        mp1 = max(mp1, float(np.max(v1)) - ratio1 * wmax, ratio1 * wmin - float(np.min(v1)))
        mp2 = max(mp2, float(np.max(v2)) - ratio2 * wmax, ratio2 * wmin - float(np.min(v2)))

        # one-sided three-point gradient at the front drives the increment of g
        dwf = 4.0 * w[M - 1] - w[M - 2]
        dg = tau * nu / h * dwf

        s1 = np.empty(M)
        s1[0] = 0.0  # zero-flux reflection makes the centered difference vanish
        s1[1:] = -chi1 * (v1[2 : M + 1] - v1[0 : M - 1]) + chi2 * (
            v2[2 : M + 1] - v2[0 : M - 1]
        )
        s2 = -chi1 * lam1 * v1[:M] + chi2 * lam2 * v2[:M] + a

        wm[0] = w[1]  # fictitious node w[-1] = w[1]
        wm[1:] = w[0 : M - 1]
        inv_g = 1.0 / g
        tau_h2 = tau / (h * h)
        with np.errstate(over="ignore", invalid="ignore"):
            adv = (z * nu * dwf + s1) / (4.0 * g)
            aj = tau_h2 * (inv_g - adv)
            cj = tau_h2 * (inv_g + adv)
            bj = 1.0 - 2.0 * tau_h2 * inv_g + s2 * tau + s3tau * w[:M]
            wn[:M] = aj * wm + bj * w[:M] + cj * w[1 : M + 1]
        wn[M] = 0.0
        min_a = min(min_a, float(np.min(aj)))
        min_b = min(min_b, float(np.min(bj)))
        min_c = min(min_c, float(np.min(cj)))

        g_next = g + dg
        # g <= 0 leaves the transform's domain: same abort as NaN/inf
        if not (np.all(np.isfinite(wn)) and math.isfinite(g_next) and g_next > 0):
            nonfinite = n0 + k + 1
            w[:] = wn
            g = g_next
            steps_done = k + 1
            break

        w[:] = wn
        g = g_next
        steps_done = k + 1

        min_dg = min(min_dg, dg)
        wmin = float(np.min(w))
        wmax = float(np.max(w))
        min_w = min(min_w, wmin)
        max_w = max(max_w, wmax)
        if wmin < 0 and first_negative < 0:
            first_negative = n0 + k + 1
        t_now = (n0 + k + 1) * tau
        norm = max(abs(wmin), abs(wmax))
        max_env_excess = max(max_env_excess, norm * math.exp(-env_rate * t_now) - w0_norm)

    return {
        "g": g,
        "steps_done": steps_done,
        "min_w": min_w,
        "max_w": max_w,
        "min_coeff_a": min_a,
        "min_coeff_b": min_b,
        "min_coeff_c": min_c,
        "first_negative_step": first_negative,
        "nonfinite_step": nonfinite,
        "min_front_increment": min_dg,
        "max_env_excess": max_env_excess,
        "mp_excess_v1": mp1,
        "mp_excess_v2": mp2,
    }

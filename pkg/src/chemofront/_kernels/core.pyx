# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled time-stepping kernel.

Same contract and same floating-point operation order as the NumPy
fallback in pure.py; see that module for the reference semantics.
"""

from libc.math cimport exp, isfinite

import numpy as np


cdef void _solve_chemical(double lam, double mu, double g, double h,
                          double[::1] w, double[::1] v,
                          double[::1] cp, double[::1] dp) noexcept nogil:
    # Rows: half-cell balances at both ends, three-point stencil inside.
    # Strict diagonal dominance (lam > 0) makes elimination pivot-safe.
    cdef Py_ssize_t M = w.shape[0] - 1
    cdef double inv_gh = 1.0 / (g * h)
    cdef double inv_gh2 = 1.0 / (g * h * h)
    cdef double d0 = -(inv_gh + 0.5 * h * lam)
    cdef double di = -2.0 * inv_gh2 - lam
    cdef double lo = inv_gh2
    cdef double up = inv_gh2
    cdef double den
    cdef Py_ssize_t j

    cp[0] = inv_gh / d0
    dp[0] = (-(0.5 * h) * mu * w[0]) / d0
    for j in range(1, M):
        den = di - lo * cp[j - 1]
        cp[j] = up / den
        dp[j] = ((-mu * w[j]) - lo * dp[j - 1]) / den
    den = d0 - inv_gh * cp[M - 1]
    dp[M] = ((-(0.5 * h) * mu * w[M]) - inv_gh * dp[M - 1]) / den

    v[M] = dp[M]
    for j in range(M - 1, -1, -1):
        v[j] = dp[j] - cp[j] * v[j + 1]


def advance(double[::1] w, double[::1] v1, double[::1] v2,
            double g, double tau, double h,
            long n0, long n_steps,
            double a, double b, double chi1, double chi2,
            double lam1, double lam2, double mu1, double mu2, double nu,
            double env_rate, double w0_norm):
    """Run n_steps explicit steps in place; return new g plus diagnostics."""
    cdef Py_ssize_t M = w.shape[0] - 1
    cdef double[::1] wn = np.empty(M + 1)
    cdef double[::1] cp = np.empty(M + 1)
    cdef double[::1] dp = np.empty(M + 1)

    cdef double s3tau = (chi1 * mu1 - chi2 * mu2 - b) * tau
    cdef double ratio1 = mu1 / lam1
    cdef double ratio2 = mu2 / lam2

    cdef double min_w = np.inf
    cdef double max_w = -np.inf
    cdef double min_a = np.inf
    cdef double min_b = np.inf
    cdef double min_c = np.inf
    cdef double min_dg = np.inf
    cdef double max_env_excess = -np.inf
    cdef double mp1 = -np.inf
    cdef double mp2 = -np.inf
    cdef long first_negative = -1
    cdef long nonfinite = -1
    cdef long steps_done = 0

    cdef Py_ssize_t k, j
    cdef double wmin, wmax, vmin, vmax, excess
    cdef double dwf, dg, g_next, s1, s2, zj, adv, aj, bj, cj
    cdef double inv_g, tau_h2, base_b, wm_j, v1m, v2m, norm, t_now
    cdef bint ok

    with nogil:
        for k in range(n_steps):
            _solve_chemical(lam1, mu1, g, h, w, v1, cp, dp)
            _solve_chemical(lam2, mu2, g, h, w, v2, cp, dp)

            wmin = w[0]
            wmax = w[0]
            for j in range(1, M + 1):
                if w[j] < wmin: wmin = w[j]
                if w[j] > wmax: wmax = w[j]
            vmin = v1[0]
            vmax = v1[0]
            for j in range(1, M + 1):
                if v1[j] < vmin: vmin = v1[j]
                if v1[j] > vmax: vmax = v1[j]
            excess = vmax - ratio1 * wmax
            if ratio1 * wmin - vmin > excess: excess = ratio1 * wmin - vmin
            if excess > mp1: mp1 = excess
            vmin = v2[0]
            vmax = v2[0]
            for j in range(1, M + 1):
                if v2[j] < vmin: vmin = v2[j]
                if v2[j] > vmax: vmax = v2[j]
            excess = vmax - ratio2 * wmax
            if ratio2 * wmin - vmin > excess: excess = ratio2 * wmin - vmin
            if excess > mp2: mp2 = excess

            dwf = 4.0 * w[M - 1] - w[M - 2]
            dg = tau * nu / h * dwf

            inv_g = 1.0 / g
            tau_h2 = tau / (h * h)
            base_b = 1.0 - 2.0 * tau_h2 * inv_g
            for j in range(M):
                if j == 0:
                    wm_j = w[1]
                    v1m = v1[1]
                    v2m = v2[1]
                else:
                    wm_j = w[j - 1]
                    v1m = v1[j - 1]
                    v2m = v2[j - 1]
                s1 = -chi1 * (v1[j + 1] - v1m) + chi2 * (v2[j + 1] - v2m)
                s2 = -chi1 * lam1 * v1[j] + chi2 * lam2 * v2[j] + a
                zj = j * h
                adv = (zj * nu * dwf + s1) / (4.0 * g)
                aj = tau_h2 * (inv_g - adv)
                cj = tau_h2 * (inv_g + adv)
                bj = base_b + s2 * tau + s3tau * w[j]
                wn[j] = aj * wm_j + bj * w[j] + cj * w[j + 1]
                if aj < min_a: min_a = aj
                if bj < min_b: min_b = bj
                if cj < min_c: min_c = cj
            wn[M] = 0.0

            g_next = g + dg
            # g <= 0 leaves the transform's domain: same abort as NaN/inf
            ok = isfinite(g_next) != 0 and g_next > 0
            wmin = wn[0]
            wmax = wn[0]
            for j in range(M + 1):
                if isfinite(wn[j]) == 0:
                    ok = False
                if wn[j] < wmin: wmin = wn[j]
                if wn[j] > wmax: wmax = wn[j]
            for j in range(M + 1):
                w[j] = wn[j]
            g = g_next
            steps_done = k + 1
            if not ok:
                nonfinite = n0 + k + 1
                break

            if dg < min_dg: min_dg = dg
            if wmin < min_w: min_w = wmin
            if wmax > max_w: max_w = wmax
            if wmin < 0 and first_negative < 0:
                first_negative = n0 + k + 1
            t_now = (n0 + k + 1) * tau
            norm = wmax if wmax > -wmin else -wmin
            excess = norm * exp(-env_rate * t_now) - w0_norm
            if excess > max_env_excess: max_env_excess = excess

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

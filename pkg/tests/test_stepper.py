import math

import numpy as np
import pytest

from chemofront.elliptic import solve_chemical
from chemofront.errors import InvalidArgument, NonFiniteAbort
from chemofront.grid import GridSpec, build_grid, sample_initial
from chemofront.model import ModelParams
from chemofront.stepper import chemo_terms, run, stefan_increment, step
from fisher_oracle import fisher_run, fisher_step


def params(**kw):
    base = dict(a=2.0, b=1.0, chi1=0.2, chi2=0.1, lambda1=1.0, lambda2=2.0,
                mu1=1.0, mu2=2.0, nu=0.8, sigma=1.0, h0=2.0)
    base.update(kw)
    return ModelParams(**base)


def stable_grid(M, T, h0, factor=0.45):
    if M < 8:
        # tiny grids for hand-checkable one-step oracles bypass the M floor
        return GridSpec(M=M, tau=factor * h0 * h0 / (M * M), T=T)
    return build_grid(M, factor * h0 * h0 / (M * M), T)


class TestChemoTerms:
    def test_fisher_reduction(self):
        p = params(chi1=0.0, chi2=0.0)
        V = np.linspace(0, 1, 9)
        s1, s2, s3 = chemo_terms(3, V, V, p)
        assert (s1, s2, s3) == (0.0, p.a, -p.b)

    def test_cubic_coefficient(self):
        p = params(chi1=0.2, chi2=0.1, mu1=1.0, mu2=2.0, b=1.0)
        _, _, s3 = chemo_terms(1, np.zeros(5), np.zeros(5), p)
        assert s3 == pytest.approx(-1.0)

    def test_constant_fields_no_drift(self):
        p = params()
        V1 = np.full(9, 1.3)
        V2 = np.full(9, 0.4)
        s1, _, _ = chemo_terms(4, V1, V2, p)
        assert s1 == 0.0

    def test_reflection_at_origin(self):
        p = params()
        rng = np.random.default_rng(0)
        V1 = rng.uniform(0, 1, 9)
        V2 = rng.uniform(0, 1, 9)
        s1, _, _ = chemo_terms(0, V1, V2, p)
        assert s1 == 0.0

    def test_interior_value(self):
        p = params(chi1=0.5, chi2=0.25)
        V1 = np.array([0.0, 1.0, 3.0])
        V2 = np.array([0.0, 2.0, 4.0])
        s1, s2, _ = chemo_terms(1, V1, V2, p)
        assert s1 == pytest.approx(-0.5 * 3.0 + 0.25 * 4.0)
        assert s2 == pytest.approx(-0.5 * 1.0 * 1.0 + 0.25 * 2.0 * 2.0 + 2.0)

    def test_out_of_range(self):
        p = params()
        with pytest.raises(InvalidArgument):
            chemo_terms(8, np.zeros(9), np.zeros(9), p)  # j = M not allowed


class TestStefanIncrement:
    def test_direct_arithmetic(self):
        grid = GridSpec(M=100, tau=0.001, T=1.0)
        p = params(nu=0.8)
        s = sample_initial(p, grid)
        s.w[99] = 0.05
        s.w[98] = 0.099
        assert stefan_increment(s, p, grid) == pytest.approx(0.00808, rel=1e-12)

    def test_zero_density(self):
        grid = stable_grid(16, 1.0, 1.0)
        s = sample_initial(params(sigma=0.0), grid)
        assert stefan_increment(s, params(sigma=0.0), grid) == 0.0

    def test_smooth_profile_two_point_form(self):
        # for smooth w with w(1)=0: 4w_{M-1} - w_{M-2} = 2w_{M-1} + O(h^2)
        p = params()
        for M in (64, 128, 256):
            grid = stable_grid(M, 1.0, p.h0)
            s = sample_initial(p, grid)
            inc = stefan_increment(s, p, grid)
            two_point = 2.0 * grid.tau * p.nu / grid.h * s.w[M - 1]
            scale = grid.tau * p.nu / grid.h
            assert abs(inc - two_point) <= 3.0 * scale * grid.h ** 2


def chemo_oracle_step(w, V1, V2, g, p, h, tau):
    """Direct term-by-term evaluation of the transformed equation, scalar loops."""
    M = len(w) - 1
    dwf = 4.0 * w[M - 1] - w[M - 2]
    dg = tau * p.nu / h * dwf
    wn = np.empty_like(w)
    for j in range(M):
        wm = w[j - 1] if j > 0 else w[1]
        v1m = V1[j - 1] if j > 0 else V1[1]
        v2m = V2[j - 1] if j > 0 else V2[1]
        s1 = -p.chi1 * (V1[j + 1] - v1m) + p.chi2 * (V2[j + 1] - v2m)
        s2 = -p.chi1 * p.lambda1 * V1[j] + p.chi2 * p.lambda2 * V2[j] + p.a
        s3 = p.chi1 * p.mu1 - p.chi2 * p.mu2 - p.b
        dc = (w[j + 1] - wm) / (2.0 * h)
        d2 = (wm - 2.0 * w[j] + w[j + 1]) / (h * h)
        zj = j * h
        rhs = (
            d2
            + (s1 / (2.0 * h)) * dc
            + s2 * w[j] * g
            + s3 * w[j] * w[j] * g
        )
        wn[j] = w[j] + (tau / g) * ((zj / 2.0) * dc * (dg / tau) + rhs)
    wn[M] = 0.0
    return wn, g + dg


class TestStep:
    def test_zero_is_fixed_point(self):
        p = params(sigma=0.0)
        grid = stable_grid(16, 1.0, p.h0)
        s = sample_initial(p, grid)
        s2, diag = step(s, p, grid)
        assert np.all(s2.w == 0.0)
        assert s2.g == s.g
        assert diag.front_increment == 0.0

    def test_fisher_one_step_matches_oracle(self):
        p = params(chi1=0.0, chi2=0.0, sigma=1.0, h0=1.5)
        M = 4
        grid = stable_grid(M, 1.0, p.h0)
        s = sample_initial(p, grid)
        s_next, _ = step(s, p, grid)
        w_oracle, g_oracle = fisher_step(s.w, s.g, p.a, p.b, p.nu, grid.h, grid.tau)
        assert np.max(np.abs(s_next.w - w_oracle)) <= 1e-14
        assert s_next.g == pytest.approx(g_oracle, abs=1e-16)

    def test_chemo_one_step_matches_direct_evaluation(self):
        p = params()
        M = 4
        grid = stable_grid(M, 1.0, p.h0)
        s = sample_initial(p, grid)
        s_next, _ = step(s, p, grid)
        w_oracle, g_oracle = chemo_oracle_step(s.w, s.V1, s.V2, s.g, p, grid.h, grid.tau)
        assert np.max(np.abs(s_next.w - w_oracle)) <= 1e-14
        assert s_next.g == pytest.approx(g_oracle, abs=1e-16)

    def test_chemo_many_nodes_matches_direct_evaluation(self):
        p = params(chi1=0.7, chi2=0.4, lambda1=2.3, lambda2=0.9, mu1=1.1,
                   mu2=0.8, nu=1.2, sigma=2.0, h0=1.2)
        M = 32
        grid = stable_grid(M, 1.0, p.h0)
        s = sample_initial(p, grid)
        s_next, _ = step(s, p, grid)
        w_oracle, _ = chemo_oracle_step(s.w, s.V1, s.V2, s.g, p, grid.h, grid.tau)
        assert np.max(np.abs(s_next.w - w_oracle)) <= 1e-13

    def test_front_pinned_to_zero(self):
        p = params()
        grid = stable_grid(16, 1.0, p.h0)
        s = sample_initial(p, grid)
        for _ in range(5):
            s, _ = step(s, p, grid)
        assert s.w[16] == 0.0

    def test_diagnostics_match_manual_coefficients(self):
        p = params()
        M = 8
        grid = stable_grid(M, 1.0, p.h0)
        s = sample_initial(p, grid)
        _, diag = step(s, p, grid)
        # recompute the three stencil coefficient arrays directly
        h, tau, g = grid.h, grid.tau, s.g
        dwf = 4.0 * s.w[M - 1] - s.w[M - 2]
        mins = {"a": math.inf, "b": math.inf, "c": math.inf}
        for j in range(M):
            s1, s2, s3 = chemo_terms(j, s.V1, s.V2, p)
            adv = (j * h * p.nu * dwf + s1) / (4.0 * g)
            mins["a"] = min(mins["a"], tau / h ** 2 * (1.0 / g - adv))
            mins["c"] = min(mins["c"], tau / h ** 2 * (1.0 / g + adv))
            mins["b"] = min(
                mins["b"], 1.0 - 2.0 * tau / (g * h * h) + s2 * tau + s3 * tau * s.w[j]
            )
        assert diag.min_coeff_a == pytest.approx(mins["a"], rel=1e-12)
        assert diag.min_coeff_b == pytest.approx(mins["b"], rel=1e-12)
        assert diag.min_coeff_c == pytest.approx(mins["c"], rel=1e-12)
        assert diag.positivity_ok

    def test_nonfinite_aborts(self):
        p = params()
        grid = build_grid(16, 1e6, 1.0)  # absurd step to blow up immediately
        s = sample_initial(p, grid)
        s.w[3] = 1e308
        with pytest.raises(NonFiniteAbort):
            for _ in range(10):
                s, _ = step(s, p, grid)


class TestRun:
    def test_zero_amplitude_front_fixed(self):
        p = params(sigma=0.0)
        grid = stable_grid(16, 2.0, p.h0)
        traj = run(p, grid, sample_every=0.5)
        assert traj.h[-1] == p.h0
        assert np.all(traj.sup_w == 0.0)

    def test_monotone_front_and_positivity(self):
        p = params()
        grid = stable_grid(48, 2.0, p.h0)
        traj = run(p, grid, sample_every=0.25, allow_unstable_tau=True)
        assert np.all(np.diff(traj.h) >= 0)
        assert traj.diagnostics.min_w >= 0.0
        assert traj.diagnostics.min_front_increment >= 0.0

    def test_envelope_holds(self):
        p = params()
        grid = stable_grid(32, 1.0, p.h0)
        traj = run(p, grid, sample_every=0.25, allow_unstable_tau=True)
        assert traj.diagnostics.max_env_excess <= 1e-9

    def test_fisher_pipeline_equivalence_100_steps(self):
        p = params(chi1=0.0, chi2=0.0, sigma=1.0, h0=1.5, nu=0.6)
        M = 32
        grid = stable_grid(M, 1.0, p.h0)
        n = 100
        horizon = n * grid.tau
        traj = run(p, GridSpec(M=M, tau=grid.tau, T=horizon),
                   sample_every=horizon, allow_unstable_tau=True)
        w_oracle, g_oracle = fisher_run(p.sigma, p.h0, p.a, p.b, p.nu, M, grid.tau, n)
        assert traj.final_state.n == n
        assert np.max(np.abs(traj.final_state.w - w_oracle)) <= 1e-12
        assert abs(traj.final_state.g - g_oracle) <= 1e-12

    def test_tau_guard_requires_override(self):
        p = params()
        grid = stable_grid(32, 5.0, p.h0)  # way above the positivity bound at T=5
        with pytest.raises(InvalidArgument):
            run(p, grid, sample_every=1.0)

    def test_sample_grid_and_speeds(self):
        p = params()
        grid = stable_grid(48, 3.0, p.h0)
        traj = run(p, grid, sample_every=0.5, window=1.0, allow_unstable_tau=True)
        assert traj.t[0] == 0.0
        assert traj.t[-1] >= 3.0 - 1e-9
        assert math.isnan(traj.h_over_t[0])
        assert math.isnan(traj.dh_dt[0])  # no full window at t=0
        # windowed slope consistent with the h samples
        i = len(traj.t) - 1
        h_back = np.interp(traj.t[i] - 1.0, traj.t, traj.h)
        assert traj.dh_dt[i] == pytest.approx((traj.h[i] - h_back) / 1.0, rel=1e-12)

    def test_snapshots_consistent(self):
        p = params()
        grid = stable_grid(32, 1.0, p.h0)
        traj = run(p, grid, sample_every=0.5, snapshot_times=[0.0, 0.5, 1.0],
                   allow_unstable_tau=True)
        assert len(traj.snapshots) == 3
        snap0 = traj.snapshots[0]
        assert snap0.t == 0.0
        assert np.allclose(snap0.w, p.sigma * np.cos(0.5 * np.pi * snap0.z), atol=1e-15)
        assert snap0.x[-1] == pytest.approx(p.h0)
        for snap in traj.snapshots:
            V1 = solve_chemical(p.lambda1, p.mu1, snap.x[-1] ** 2, snap.w, grid.h)
            assert np.allclose(snap.V1, V1, atol=1e-12)

    def test_backend_selection_argument(self):
        p = params()
        grid = stable_grid(16, 0.5, p.h0)
        with pytest.raises(InvalidArgument):
            run(p, grid, backend="nonexistent", allow_unstable_tau=True)

import numpy as np
import pytest

from chemofront.dynamics import (
    SPREADING,
    UNDECIDED,
    VANISHING,
    ClassifyThresholds,
    bisect_critical,
    classify,
    speed_at,
    spreading_speed,
    sweep,
)
from chemofront.errors import BracketError, InsufficientData, InvalidArgument
from chemofront.grid import build_grid
from chemofront.model import ModelParams, critical_length
from chemofront.stepper import RunDiagnostics, Trajectory, run


def params(**kw):
    base = dict(a=2.0, b=1.0, chi1=0.0, chi2=0.0, lambda1=1.0, lambda2=1.0,
                mu1=0.0, mu2=0.0, nu=0.5, sigma=1.0, h0=0.8)
    base.update(kw)
    return ModelParams(**base)


def fake_trajectory(t, h, sup_w, w0=None):
    t = np.asarray(t, dtype=float)
    h = np.asarray(h, dtype=float)
    sup_w = np.asarray(sup_w, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        h_over_t = np.where(t > 0, h / t, np.nan)
    dh_dt = np.full_like(t, np.nan)
    for i, ti in enumerate(t):
        if ti - 1.0 >= t[0] - 1e-12:
            dh_dt[i] = (h[i] - np.interp(ti - 1.0, t, h)) / 1.0
    return Trajectory(
        t=t, h=h, h_over_t=h_over_t, dh_dt=dh_dt, sup_w=sup_w,
        w0=np.asarray(w0 if w0 is not None else sup_w, dtype=float),
        snapshots=[], final_state=None, diagnostics=RunDiagnostics(), window=1.0,
    )


def quick_grid(M=32, T=6.0, h0=0.8):
    return build_grid(M, 0.45 * h0 * h0 / (M * M), T)


class TestClassify:
    def test_zero_amplitude_vanishes_at_h0(self):
        p = params(sigma=0.0)
        grid = quick_grid()
        traj = run(p, grid, sample_every=0.5, allow_unstable_tau=True)
        out = classify(traj, p)
        assert out.kind == VANISHING
        assert out.final_h == p.h0
        assert "critical length" in out.evidence

    def test_synthetic_spreading(self):
        p = params()
        lstar = critical_length(p.a)
        t = np.linspace(0, 10, 101)
        traj = fake_trajectory(t, 1.0 + 0.7 * t, np.full_like(t, 1.9))
        out = classify(traj, p)
        assert out.kind == SPREADING
        assert out.speed == pytest.approx(0.7, rel=1e-9)
        assert out.final_h > 2 * lstar

    def test_synthetic_vanishing(self):
        p = params()
        t = np.linspace(0, 10, 101)
        traj = fake_trajectory(t, np.full_like(t, 0.9), 1e-4 * np.exp(-t))
        out = classify(traj, p)
        assert out.kind == VANISHING

    def test_synthetic_undecided(self):
        p = params()
        t = np.linspace(0, 10, 101)
        # front stalled below threshold but density alive
        traj = fake_trajectory(t, np.full_like(t, 1.5), np.full_like(t, 0.5))
        out = classify(traj, p)
        assert out.kind == UNDECIDED

    def test_threshold_override(self):
        p = params()
        t = np.linspace(0, 10, 101)
        traj = fake_trajectory(t, 1.0 + 0.7 * t, np.full_like(t, 1.9))
        strict = ClassifyThresholds(kappa_s=20.0)
        assert classify(traj, p, strict).kind == UNDECIDED

    def test_empty_trajectory_rejected(self):
        p = params()
        traj = fake_trajectory([], [], [])
        with pytest.raises(InvalidArgument):
            classify(traj, p)


class TestSpreadingSpeed:
    def test_linear_front_exact(self):
        t = np.linspace(0, 10, 201)
        traj = fake_trajectory(t, 0.3 + 1.7 * t, np.ones_like(t))
        assert spreading_speed(traj, window=1.0) == pytest.approx(1.7, rel=1e-12)
        assert speed_at(traj, 5.0, window=2.0) == pytest.approx(1.7, rel=1e-12)

    def test_insufficient_data(self):
        t = np.linspace(0, 0.5, 6)
        traj = fake_trajectory(t, 1 + t, np.ones_like(t))
        with pytest.raises(InsufficientData):
            spreading_speed(traj, window=1.0)
        with pytest.raises(InsufficientData):
            speed_at(traj, 0.4, window=0.6)

    def test_h_over_t_recorded(self):
        t = np.linspace(0, 4, 41)
        traj = fake_trajectory(t, 2.0 * t, np.ones_like(t))
        assert np.isnan(traj.h_over_t[0])
        assert traj.h_over_t[-1] == pytest.approx(2.0)


class TestBisect:
    def test_degenerate_bracket(self):
        p = params()
        result = bisect_critical("nu", 0.3, 0.3, 0.01, p, quick_grid())
        assert (result.lower, result.upper) == (0.3, 0.3)
        assert result.iterations == 0
        assert result.simulations == 0

    def test_invalid_parameter_name(self):
        with pytest.raises(InvalidArgument):
            bisect_critical("h0", 0.1, 1.0, 0.1, params(), quick_grid())

    def test_invalid_bracket_order(self):
        with pytest.raises(BracketError):
            bisect_critical("nu", 1.0, 0.5, 0.1, params(), quick_grid())

    def test_swapped_outcomes_raise(self):
        # nu large at lo -> spreading at the lower end: invalid bracket
        p = params(sigma=1.5)
        with pytest.raises(BracketError):
            bisect_critical("nu", 3.0, 3.5, 0.5, p, quick_grid(T=8.0))

    def test_brackets_nu_with_invariant(self):
        # Fisher-KPP, short habitat: tiny nu vanishes, large nu spreads
        p = params(sigma=1.0, h0=0.8)
        result = bisect_critical("nu", 0.02, 3.0, 0.5, p, quick_grid(T=8.0))
        assert 0.02 <= result.lower < result.upper <= 3.0
        assert result.upper - result.lower <= 0.5
        assert result.outcomes_at_bounds == (VANISHING, SPREADING)

    def test_brackets_sigma(self):
        p = params(nu=0.5, h0=0.8)
        result = bisect_critical("sigma", 0.01, 4.0, 1.0, p, quick_grid(T=8.0))
        assert result.outcomes_at_bounds == (VANISHING, SPREADING)
        assert result.upper - result.lower <= 1.0


class TestSweep:
    def test_single_value(self):
        p = params(nu=2.0, h0=1.2, sigma=1.5)
        grid = quick_grid(M=32, T=4.0, h0=1.2)
        table = sweep(p, grid, "sigma", [1.5], [2.0, 3.0, 4.0])
        assert table.speeds.shape == (3, 1)
        assert not table.errors
        assert np.all(np.isfinite(table.speeds))

    def test_cell_error_isolated(self):
        p = params(nu=2.0, h0=1.2)
        grid = quick_grid(M=32, T=4.0, h0=1.2)
        table = sweep(p, grid, "sigma", [1.0, -3.0], [2.0])
        assert 1 in table.errors
        assert np.isnan(table.speeds[0, 1])
        assert np.isfinite(table.speeds[0, 0])

    def test_empty_values_rejected(self):
        with pytest.raises(InvalidArgument):
            sweep(params(), quick_grid(), "sigma", [], [1.0])

    def test_unknown_axis_rejected_up_front(self):
        grid = quick_grid(M=32, T=4.0)
        with pytest.raises(InvalidArgument):
            sweep(params(), grid, "not_a_param", [1.0], [1.0])

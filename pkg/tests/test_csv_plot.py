import numpy as np
import pytest

from chemofront.csvio import (
    write_bisection,
    write_snapshot,
    write_table,
    write_timeseries,
)
from chemofront.dynamics import BisectionResult, SweepTable
from chemofront.errors import InvalidArgument
from chemofront.grid import build_grid
from chemofront.model import ModelParams
from chemofront.plotting import PlotSeries, emit_plot
from chemofront.stepper import run

from test_dynamics import fake_trajectory


def small_run(sigma=1.0, h0=1.5, T=2.0, M=32, snapshot_times=None):
    p = ModelParams(a=2.0, b=1.0, chi1=0.1, chi2=0.05, lambda1=1.0, lambda2=2.0,
                    mu1=1.0, mu2=1.0, nu=0.8, sigma=sigma, h0=h0)
    grid = build_grid(M, 0.45 * h0 * h0 / (M * M), T)
    return p, run(p, grid, sample_every=0.25, snapshot_times=snapshot_times or [],
                  allow_unstable_tau=True)


class TestTimeseries:
    def test_header_and_monotone_h(self, tmp_path):
        _, traj = small_run()
        path = write_timeseries(traj, tmp_path / "ts.csv")
        lines = path.read_text().splitlines()
        assert lines[0] == "t,h,h_over_t,dh_dt,sup_w,w_at_0"
        h = [float(line.split(",")[1]) for line in lines[1:]]
        assert all(b >= a for a, b in zip(h, h[1:]))

    def test_zero_length_header_only(self, tmp_path):
        traj = fake_trajectory([], [], [])
        path = write_timeseries(traj, tmp_path / "empty.csv")
        assert path.read_text() == "t,h,h_over_t,dh_dt,sup_w,w_at_0\n"

    def test_deterministic_bytes(self, tmp_path):
        _, traj = small_run()
        p1 = write_timeseries(traj, tmp_path / "a.csv")
        p2 = write_timeseries(traj, tmp_path / "b.csv")
        assert p1.read_bytes() == p2.read_bytes()

    def test_full_precision_round_trip(self, tmp_path):
        _, traj = small_run()
        path = write_timeseries(traj, tmp_path / "ts.csv")
        lines = path.read_text().splitlines()[1:]
        h_back = np.array([float(line.split(",")[1]) for line in lines])
        assert np.array_equal(h_back, traj.h)


class TestSnapshot:
    def test_initial_snapshot_is_cosine(self, tmp_path):
        p, traj = small_run(sigma=0.7, snapshot_times=[0.0])
        snap = traj.snapshots[0]
        path = write_snapshot(snap, tmp_path / "snap.csv")
        lines = path.read_text().splitlines()
        assert lines[0] == "z,x,w,v1,v2"
        rows = np.array([[float(v) for v in line.split(",")] for line in lines[1:]])
        z, x, w = rows[:, 0], rows[:, 1], rows[:, 2]
        assert np.allclose(w, 0.7 * np.cos(0.5 * np.pi * z), atol=1e-15)
        assert x[-1] == pytest.approx(p.h0)


class TestTableAndBisection:
    def test_table_layout(self, tmp_path):
        table = SweepTable(
            axis="sigma", values=[0.1, 1.0], report_times=[1.0, 2.0],
            speeds=np.array([[0.5, 0.6], [0.7, 0.8]]), errors={},
        )
        path = write_table(table, tmp_path / "table.csv")
        lines = path.read_text().splitlines()
        assert lines[0] == "T,sigma=0.1,sigma=1"
        assert lines[1].startswith("1.0,0.5,")

    def test_table_error_comment(self, tmp_path):
        table = SweepTable(
            axis="h0", values=[1.0], report_times=[1.0],
            speeds=np.array([[np.nan]]), errors={0: "boom"},
        )
        text = write_table(table, tmp_path / "t.csv").read_text()
        assert "# column h0=1 failed: boom" in text

    def test_bisection_csv(self, tmp_path):
        result = BisectionResult(
            parameter_name="nu", lower=0.034, upper=0.038, iterations=3,
            outcomes_at_bounds=("Vanishing", "Spreading"), simulations=5,
        )
        text = write_bisection(result, tmp_path / "b.csv").read_text()
        assert "parameter,lower,upper" in text.splitlines()[0]
        assert text.splitlines()[1].startswith("nu,0.034,0.038,3,5,Vanishing,Spreading")


class TestPlot:
    def test_single_point_marker(self, tmp_path):
        path = emit_plot([PlotSeries("pt", np.array([1.0]), np.array([2.0]))],
                         tmp_path / "p.svg")
        text = path.read_text()
        assert text.startswith("<svg")
        assert "<circle" in text

    def test_polyline_and_labels(self, tmp_path):
        x = np.linspace(0, 10, 50)
        path = emit_plot(
            [PlotSeries("h/t", x, 0.7 * x), PlotSeries("dh", x, np.cos(x))],
            tmp_path / "p.svg", title="speeds", xlabel="t", ylabel="v",
        )
        text = path.read_text()
        assert text.count("<polyline") == 2
        assert "speeds" in text and "h/t" in text

    def test_empty_series_rejected(self, tmp_path):
        with pytest.raises(InvalidArgument):
            emit_plot([], tmp_path / "p.svg")
        with pytest.raises(InvalidArgument):
            emit_plot([PlotSeries("e", np.array([]), np.array([]))], tmp_path / "p.svg")

    def test_deterministic_bytes(self, tmp_path):
        x = np.linspace(0, 1, 20)
        series = [PlotSeries("s", x, np.sin(x))]
        p1 = emit_plot(series, tmp_path / "a.svg")
        p2 = emit_plot(series, tmp_path / "b.svg")
        assert p1.read_bytes() == p2.read_bytes()

    def test_nan_values_skipped(self, tmp_path):
        x = np.array([0.0, 1.0, 2.0])
        y = np.array([np.nan, 1.0, 2.0])
        path = emit_plot([PlotSeries("s", x, y)], tmp_path / "p.svg")
        assert "<polyline" in path.read_text()

"""chemofront: front-fixing solver for an attraction-repulsion chemotaxis
system with logistic growth and a Stefan-type free boundary.

The moving habitat is mapped to the unit interval; each explicit time step
solves the two quasi-stationary chemical fields (tridiagonal systems) and
advances the density and the squared habitat length together.  The hot loop
runs in a compiled extension when available and falls back to NumPy
otherwise; see chemofront._kernels.
"""

from ._kernels import BACKEND, available_backends
from .dynamics import (
    BisectionResult,
    ClassifyThresholds,
    Outcome,
    SweepTable,
    bisect_critical,
    classify,
    spreading_speed,
    sweep,
)
from .grid import GridSpec, SimState, build_grid, physical_coordinates, sample_initial
from .model import (
    HypothesisReport,
    ModelParams,
    check_hypotheses,
    compute_K,
    compute_M,
    compute_M0,
    compute_m0,
    critical_length,
    max_stable_timestep,
)
from .presets import preset_ids, run_preset
from .stepper import Trajectory, chemo_terms, run, stefan_increment, step

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "available_backends",
    "BisectionResult",
    "ClassifyThresholds",
    "GridSpec",
    "HypothesisReport",
    "ModelParams",
    "Outcome",
    "SimState",
    "SweepTable",
    "Trajectory",
    "bisect_critical",
    "build_grid",
    "check_hypotheses",
    "chemo_terms",
    "classify",
    "compute_K",
    "compute_M",
    "compute_M0",
    "compute_m0",
    "critical_length",
    "max_stable_timestep",
    "physical_coordinates",
    "preset_ids",
    "run",
    "run_preset",
    "sample_initial",
    "spreading_speed",
    "stefan_increment",
    "step",
    "sweep",
]

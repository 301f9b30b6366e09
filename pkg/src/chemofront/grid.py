"""Fixed unit grid, front-fixed state, and the coordinate map back to x.

The moving habitat [0, h(t)] is mapped onto the fixed interval [0, 1] by
z = x/h(t); the squared habitat length g = h(t)^2 becomes an extra scalar
unknown.  SimState carries the density w and the chemical fields on the
unit grid together with g.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from . import elliptic
from .errors import InvalidArgument
from .model import ModelParams

__all__ = ["GridSpec", "SimState", "build_grid", "sample_initial", "physical_coordinates"]

MIN_CELLS = 8


@dataclass(frozen=True)
class GridSpec:
    """Uniform grid with M cells on [0, 1], time step tau, horizon T.

    The mesh width is always derived from M so that M*h == 1 holds exactly
    in the stored representation.
    """

    M: int
    tau: float
    T: float

    @property
    def h(self) -> float:
        return 1.0 / self.M

    def nodes(self) -> np.ndarray:
        return np.arange(self.M + 1) * self.h

    def steps_to(self, t: float) -> int:
        """Number of steps after which the running time first reaches t."""
        return max(0, math.ceil(t / self.tau - 1e-9))


def build_grid(M: int, tau: float, T: float) -> GridSpec:
    if not isinstance(M, (int, np.integer)) or M < MIN_CELLS:
        raise InvalidArgument(f"M must be an integer >= {MIN_CELLS}, got {M}")
    if not tau > 0:
        raise InvalidArgument(f"tau must be > 0, got {tau}")
    if not T > 0:
        raise InvalidArgument(f"T must be > 0, got {T}")
    return GridSpec(M=int(M), tau=float(tau), T=float(T))


@dataclass
class SimState:
    """Front-fixed state: squared front position g, density w, chemicals V1/V2.

    w[M] stays pinned at exactly 0 (absorbing front); g is positive and
    nondecreasing along a well-posed run.  t is always n*tau.
    """

    g: float
    w: np.ndarray
    V1: np.ndarray
    V2: np.ndarray
    n: int = 0
    t: float = 0.0

    @property
    def front(self) -> float:
        """Physical front position h(t) = sqrt(g)."""
        return math.sqrt(self.g)

    def copy(self) -> "SimState":
        return replace(
            self, w=self.w.copy(), V1=self.V1.copy(), V2=self.V2.copy()
        )


def initial_profile(sigma: float, z: np.ndarray) -> np.ndarray:
    """Cosine hump sigma*cos(pi*z/2): flat at z=0, zero exactly at z=1."""
    w = sigma * np.cos(0.5 * np.pi * z)
    w[-1] = 0.0
    return w


def sample_initial(p: ModelParams, grid: GridSpec) -> SimState:
    """Initial state from the cosine family, chemicals solved consistently."""
    z = grid.nodes()
    w = initial_profile(p.sigma, z)
    g = p.h0 * p.h0
    V1 = elliptic.solve_chemical(p.lambda1, p.mu1, g, w, grid.h)
    V2 = elliptic.solve_chemical(p.lambda2, p.mu2, g, w, grid.h)
    return SimState(g=g, w=w, V1=V1, V2=V2, n=0, t=0.0)


def physical_coordinates(s: SimState, grid: GridSpec) -> np.ndarray:
    """Map grid nodes to physical positions x = z*h(t); x[M] is the front."""
    if not s.g > 0:
        raise InvalidArgument(f"g must be > 0, got {s.g}")
    return grid.nodes() * math.sqrt(s.g)

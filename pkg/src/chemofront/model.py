"""Model parameters, standing hypotheses, and derived constants.

The model couples a logistic population density u on a growing habitat
[0, h(t)] to two quasi-stationary chemical fields: an attractant v1 and a
repellent v2.  The habitat endpoint moves with the density gradient at the
front (Stefan-type condition with speed coefficient nu).

Everything in this module is a pure function of the parameter set: the
coupling constants M and K, the density bounds M0 and m0, the standing
smallness hypotheses H1-H3 on the chemotactic sensitivities, the critical
habitat length separating guaranteed spreading from possible vanishing,
and the explicit-scheme time-step bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import HypothesisViolation, InvalidArgument

__all__ = [
    "ModelParams",
    "HypothesisReport",
    "compute_M",
    "compute_K",
    "compute_M0",
    "compute_m0",
    "check_hypotheses",
    "critical_length",
    "max_stable_timestep",
    "stable_timestep_for_steps",
]


@dataclass(frozen=True)
class ModelParams:
    """Physical/chemical constants plus the cosine initial-data family.

    a, b           logistic growth and damping (both > 0)
    chi1, chi2     attraction / repulsion sensitivities (>= 0)
    lambda1/2      chemical decay rates (> 0)
    mu1, mu2       chemical production rates (>= 0)
    nu             front speed coefficient (> 0)
    sigma          initial amplitude, u0 = sigma*cos(pi*x/(2*h0)) (>= 0)
    h0             initial habitat length (> 0)
    """

    a: float
    b: float
    chi1: float
    chi2: float
    lambda1: float
    lambda2: float
    mu1: float
    mu2: float
    nu: float
    sigma: float = 1.0
    h0: float = 1.0

    def __post_init__(self):
        positive = {
            "a": self.a,
            "b": self.b,
            "lambda1": self.lambda1,
            "lambda2": self.lambda2,
            "nu": self.nu,
            "h0": self.h0,
        }
        for name, value in positive.items():
            if not value > 0:
                raise InvalidArgument(f"{name} must be > 0, got {value}")
        nonnegative = {
            "chi1": self.chi1,
            "chi2": self.chi2,
            "mu1": self.mu1,
            "mu2": self.mu2,
            "sigma": self.sigma,
        }
        for name, value in nonnegative.items():
            if not value >= 0:
                raise InvalidArgument(f"{name} must be >= 0, got {value}")
        for name in ("a", "b", "chi1", "chi2", "lambda1", "lambda2", "mu1",
                     "mu2", "nu", "sigma", "h0"):
            if not math.isfinite(getattr(self, name)):
                raise InvalidArgument(f"{name} must be finite")


@dataclass(frozen=True)
class HypothesisReport:
    """Derived constants and signed margins of the standing hypotheses.

    Margins are ``b - rhs`` so a hypothesis holds iff its margin is > 0.
    m0_value is only meaningful when H1 holds (its denominators are then
    positive); M0_value/m0_value are NaN when H1 fails.
    """

    M_value: float
    K_value: float
    M0_value: float
    m0_value: float
    h1_holds: bool
    h2_holds: bool
    h3_holds: bool
    margins: dict[str, float] = field(default_factory=dict)

    @property
    def all_hold(self) -> bool:
        return self.h1_holds and self.h2_holds and self.h3_holds


def _pos(x: float) -> float:
    return x if x > 0.0 else 0.0


def compute_M(p: ModelParams) -> float:
    """Coupling constant used by the hypotheses: the smaller of two
    positive-part combinations of the chemical coefficients.

    Always satisfies 0 <= M <= chi2*mu2.
    """
    c1 = p.chi1 * p.mu1
    c2 = p.chi2 * p.mu2
    cross = _pos(c2 * p.lambda2 - c1 * p.lambda1)
    t1 = (cross + c1 * _pos(p.lambda1 - p.lambda2)) / p.lambda2
    t2 = (cross + c2 * _pos(p.lambda1 - p.lambda2)) / p.lambda1
    return min(t1, t2)


def compute_K(p: ModelParams) -> float:
    """Absolute-value counterpart of compute_M; K >= M >= 0."""
    c1 = p.chi1 * p.mu1
    c2 = p.chi2 * p.mu2
    cross = abs(c1 * p.lambda1 - c2 * p.lambda2)
    t1 = (cross + c1 * abs(p.lambda1 - p.lambda2)) / p.lambda2
    t2 = (cross + c2 * abs(p.lambda1 - p.lambda2)) / p.lambda1
    return min(t1, t2)


def compute_M0(p: ModelParams) -> float:
    """Asymptotic supremum bound for the density: a/(b + chi2*mu2 - chi1*mu1 - M).

    Requires H1 (positive denominator); raises HypothesisViolation otherwise.
    """
    den = p.b + p.chi2 * p.mu2 - p.chi1 * p.mu1 - compute_M(p)
    if den <= 0:
        raise HypothesisViolation(
            f"M0 undefined: b + chi2*mu2 - chi1*mu1 - M = {den} <= 0 (H1 fails)"
        )
    return p.a / den


def compute_m0(p: ModelParams) -> float:
    """Persistence floor for the density when spreading occurs.

    Positive whenever H2 holds.  Raises HypothesisViolation if a denominator
    factor is <= 0 (H1 or the damping/sensitivity balance fails).
    """
    M = compute_M(p)
    c1 = p.chi1 * p.mu1
    c2 = p.chi2 * p.mu2
    num = p.a * (p.b - 2.0 * c1 + c2 - M)
    d1 = p.b - c1 + c2 - M
    d2 = p.b - c1 + c2
    if d1 <= 0 or d2 <= 0:
        raise HypothesisViolation(
            f"m0 undefined: denominator factors ({d1}, {d2}) must be positive"
        )
    return num / (d1 * d2)


def check_hypotheses(p: ModelParams) -> HypothesisReport:
    """Evaluate H1-H3 and the derived constants for a parameter set.

    Reports only; never raises.  Several published experiments sit exactly on
    the H1 boundary (margin 0), so simulation setup must not reject them.
    """
    M = compute_M(p)
    K = compute_K(p)
    c1 = p.chi1 * p.mu1
    c2 = p.chi2 * p.mu2
    m_h1 = p.b - (c1 - c2 + M)
    m_h2 = p.b - (2.0 * c1 - c2 + M)
    m_h3 = p.b - (c1 - c2 + K)
    if m_h1 > 0:
        M0 = compute_M0(p)
        try:
            m0 = compute_m0(p)
        except HypothesisViolation:
            m0 = math.nan
    else:
        M0 = math.nan
        m0 = math.nan
    return HypothesisReport(
        M_value=M,
        K_value=K,
        M0_value=M0,
        m0_value=m0,
        h1_holds=m_h1 > 0,
        h2_holds=m_h2 > 0,
        h3_holds=m_h3 > 0,
        margins={"h1": m_h1, "h2": m_h2, "h3": m_h3},
    )


def critical_length(a: float) -> float:
    """Habitat length above which spreading is guaranteed: (pi/2)*sqrt(1/a)."""
    if not a > 0:
        raise InvalidArgument(f"growth rate must be > 0, got {a}")
    return 0.5 * math.pi * math.sqrt(1.0 / a)


def envelope_rate(p: ModelParams, w0_maxnorm: float) -> float:
    """Exponential growth rate of the sup-norm envelope along a run.

    ||w(t)||_inf <= exp(rate*t) * ||w(0)||_inf, with
    rate = a + U*(chi1*mu1 + chi2*mu2) and U = max(||w0||_inf, M0).
    """
    return p.a + _bound_U(p, w0_maxnorm) * (p.chi1 * p.mu1 + p.chi2 * p.mu2)


def _bound_U(p: ModelParams, w0_maxnorm: float) -> float:
    """Uniform density bound U = max(||w0||_inf, M0); ||w0||_inf if M0 undefined."""
    try:
        return max(w0_maxnorm, compute_M0(p))
    except HypothesisViolation:
        return w0_maxnorm


def max_stable_timestep(
    p: ModelParams,
    h: float,
    g0: float,
    T: float,
    w0_maxnorm: float,
    w0_front: float,
) -> float:
    """Time-step bound guaranteeing nonnegative stencil coefficients.

    h is the mesh width of the fixed unit grid, g0 the initial squared
    habitat length, T the horizon, w0_maxnorm the sup norm of the initial
    profile and w0_front its value one node inside the front.

    Two branches (front positivity and interior positivity) are combined
    with the explicit-diffusion cap g0*h^2/2.  A branch with nonpositive
    denominator imposes no constraint.  The bound is very conservative for
    long horizons (it scales like exp(-a*T)); production runs typically
    override it and rely on the diffusion cap alone.
    """
    if not (h > 0 and g0 > 0 and T > 0):
        raise InvalidArgument("h, g0, T must all be > 0")
    C = math.exp(p.a * T) * w0_front
    den1 = p.nu * C / g0 + h * h * (p.b * C - p.a)
    branch1 = h * h / den1 if den1 > 0 else math.inf
    rate = envelope_rate(p, w0_maxnorm)
    grown = math.exp(rate * T) * w0_maxnorm
    den2 = 2.0 / g0 + h * h * ((2.0 * p.chi2 * p.mu2 + p.b) * grown - p.a)
    branch2 = h * h / den2 if den2 > 0 else math.inf
    return min(branch1, branch2, 0.5 * g0 * h * h)


def stable_timestep_for_steps(
    p: ModelParams,
    h: float,
    g0: float,
    n_steps: int,
    w0_maxnorm: float,
    w0_front: float,
    safety: float = 0.9,
) -> float:
    """Largest tau with tau = safety*max_stable_timestep at horizon n_steps*tau.

    The bound depends on the horizon it must cover, and a fixed-step run of
    n_steps covers exactly n_steps*tau: solve the fixed point by bisection
    (the bound is decreasing in T, so the fixed point is unique).
    """
    if n_steps < 1:
        raise InvalidArgument("n_steps must be >= 1")
    cap = safety * 0.5 * g0 * h * h

    def excess(tau: float) -> float:
        bound = max_stable_timestep(p, h, g0, n_steps * tau, w0_maxnorm, w0_front)
        return safety * bound - tau

    if excess(cap) >= 0:
        return cap
    lo, hi = cap * 1e-16, cap
    for _ in range(100):
        mid = 0.5 * (lo + hi)
        if excess(mid) >= 0:
            lo = mid
        else:
            hi = mid
    return lo

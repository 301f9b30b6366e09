"""Quasi-stationary chemical fields: tridiagonal assembly and solves.

Each chemical field V satisfies (1/g) V'' - lambda*V + mu*w = 0 on the unit
grid with zero-flux ends.  Interior nodes use the standard three-point
second difference; the two end rows are half-cell balances (finite-volume
style) so the whole system stays second-order accurate.  All rows share one
sign pattern: positive off-diagonals, strictly dominant negative diagonal,
which makes the system uniquely solvable by forward elimination without
pivoting.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgument, SingularSystem

__all__ = [
    "TridiagonalSystem",
    "assemble",
    "solve_tridiagonal",
    "solve_dense_oracle",
    "solve_chemical",
    "check_max_principle",
    "MaxPrincipleReport",
]


@dataclass
class TridiagonalSystem:
    """Row-wise tridiagonal system: lower[i]*x[i-1] + diag[i]*x[i] + upper[i]*x[i+1] = rhs[i].

    lower[0] and upper[-1] are unused and kept at 0.
    """

    lower: np.ndarray
    diag: np.ndarray
    upper: np.ndarray
    rhs: np.ndarray

    def __post_init__(self):
        n = len(self.diag)
        for name in ("lower", "upper", "rhs"):
            if len(getattr(self, name)) != n:
                raise InvalidArgument(f"{name} must have {n} entries")

    @property
    def n(self) -> int:
        return len(self.diag)

    def dense(self) -> np.ndarray:
        A = np.diag(self.diag)
        A += np.diag(self.upper[:-1], 1)
        A += np.diag(self.lower[1:], -1)
        return A

    def residual(self, x: np.ndarray) -> np.ndarray:
        r = self.diag * x - self.rhs
        r[:-1] += self.upper[:-1] * x[1:]
        r[1:] += self.lower[1:] * x[:-1]
        return r


def assemble(lambda_: float, mu: float, g: float, w: np.ndarray, h: float) -> TridiagonalSystem:
    """Build the (M+1)-row system for one chemical field.

    w holds the M+1 density values on the unit grid with mesh h = 1/M;
    g is the current squared habitat length.
    """
    if not g > 0:
        raise InvalidArgument(f"g must be > 0, got {g}")
    M = len(w) - 1
    if M < 2 or abs(M * h - 1.0) > 1e-9:
        raise InvalidArgument(
            f"w has {len(w)} entries but mesh width {h} implies {round(1.0 / h) + 1}"
        )
    inv_gh = 1.0 / (g * h)
    inv_gh2 = 1.0 / (g * h * h)
    lower = np.full(M + 1, inv_gh2)
    diag = np.full(M + 1, -2.0 * inv_gh2 - lambda_)
    upper = np.full(M + 1, inv_gh2)
    rhs = -mu * np.asarray(w, dtype=float)
    # half-cell balances at both ends (flux vanishes outside)
    diag[0] = diag[M] = -(inv_gh + 0.5 * h * lambda_)
    upper[0] = inv_gh
    lower[M] = inv_gh
    rhs[0] = -(0.5 * h) * mu * w[0]
    rhs[M] = -(0.5 * h) * mu * w[M]
    lower[0] = 0.0
    upper[M] = 0.0
    return TridiagonalSystem(lower, diag, upper, rhs)


def solve_tridiagonal(sys: TridiagonalSystem) -> np.ndarray:
    """Thomas algorithm (no pivoting); safe for the diagonally dominant
    systems produced here.  Raises SingularSystem when a forward-elimination
    pivot falls below 1e-14 of its row scale.
    """
    n = sys.n
    lo, di, up, rhs = sys.lower, sys.diag, sys.upper, sys.rhs
    cp = np.empty(n)
    dp = np.empty(n)
    scale = abs(di[0]) + abs(up[0])
    if abs(di[0]) < 1e-14 * scale or scale == 0.0:
        raise SingularSystem("zero pivot in row 0")
    cp[0] = up[0] / di[0]
    dp[0] = rhs[0] / di[0]
    for i in range(1, n):
        den = di[i] - lo[i] * cp[i - 1]
        scale = abs(lo[i]) + abs(di[i]) + abs(up[i])
        if abs(den) < 1e-14 * scale or scale == 0.0:
            raise SingularSystem(f"pivot underflow in row {i}")
        cp[i] = up[i] / den
        dp[i] = (rhs[i] - lo[i] * dp[i - 1]) / den
    x = np.empty(n)
    x[n - 1] = dp[n - 1]
    for i in range(n - 2, -1, -1):
        x[i] = dp[i] - cp[i] * x[i + 1]
    return x


def solve_dense_oracle(sys: TridiagonalSystem) -> np.ndarray:
    """Reference solve through dense LU with partial pivoting (LAPACK).

    Independent of solve_tridiagonal; used to cross-check it.
    """
    try:
        return np.linalg.solve(sys.dense(), sys.rhs)
    except np.linalg.LinAlgError as exc:
        raise SingularSystem(str(exc)) from exc


def solve_chemical(lambda_: float, mu: float, g: float, w: np.ndarray, h: float) -> np.ndarray:
    """Assemble and solve one chemical field for the given density."""
    return solve_tridiagonal(assemble(lambda_, mu, g, w, h))


@dataclass(frozen=True)
class MaxPrincipleReport:
    passed: bool
    worst_index: int
    worst_excess: float
    lower_bound: float
    upper_bound: float
    tol: float


def check_max_principle(
    V: np.ndarray, w: np.ndarray, lambda_: float, mu: float
) -> MaxPrincipleReport:
    """Verify (mu/lambda)*min(w) <= V <= (mu/lambda)*max(w) within tolerance.

    Discrete analogue of the elliptic maximum principle; tolerance is
    1e-9*(1 + ||w||_inf).  Returns a report with the worst offending index.
    """
    V = np.asarray(V, dtype=float)
    w = np.asarray(w, dtype=float)
    if len(V) != len(w):
        raise InvalidArgument("V and w must have the same length")
    ratio = mu / lambda_
    lower = ratio * float(np.min(w))
    upper = ratio * float(np.max(w))
    tol = 1e-9 * (1.0 + float(np.max(np.abs(w))))
    excess = np.maximum(V - upper, lower - V)
    worst = int(np.argmax(excess))
    worst_excess = float(excess[worst])
    return MaxPrincipleReport(
        passed=worst_excess <= tol,
        worst_index=worst,
        worst_excess=worst_excess,
        lower_bound=lower,
        upper_bound=upper,
        tol=tol,
    )

"""Exception hierarchy shared across the package."""


class ChemoFrontError(Exception):
    """Base class for all chemofront errors."""


class InvalidArgument(ChemoFrontError, ValueError):
    """An argument is outside its documented domain."""


class HypothesisViolation(ChemoFrontError, ValueError):
    """A derived constant is requested for parameters that break its hypothesis."""


class SingularSystem(ChemoFrontError, ArithmeticError):
    """A linear solve hit a pivot too small to trust."""


class NonFiniteAbort(ChemoFrontError, FloatingPointError):
    """A run produced NaN/inf; carries the offending step index."""

    def __init__(self, step: int, message: str | None = None):
        self.step = step
        super().__init__(message or f"non-finite value at step {step}")


class BracketError(ChemoFrontError, ValueError):
    """Bisection endpoints do not straddle the sought transition."""


class BudgetExceeded(ChemoFrontError, RuntimeError):
    """An iterative search ran out of its iteration budget."""


class InsufficientData(ChemoFrontError, ValueError):
    """A trajectory is too short for the requested estimate."""


class ConfigError(ChemoFrontError, ValueError):
    """Config text failed to parse or validate; carries a line number when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class UnknownPreset(ChemoFrontError, ValueError):
    """Requested preset id is not registered."""

"""Custom exceptions for simplexgrad."""

from __future__ import annotations

from typing import Any

# Saturating stand-in for an unbounded candidate bound.
BOUND_SENTINEL = 1e300


class SimplexGradError(Exception):
    """Base exception for simplexgrad errors."""

    def __init__(self, message: str, details: dict[str, Any] | None = None):
        self.details = dict(details or {})
        context = ""
        if self.details:
            context = " (" + ", ".join(f"{k}={v}" for k, v in self.details.items()) + ")"
        super().__init__(f"{message}{context}")


class UnpoisedSetError(SimplexGradError):
    """Sample set is not poised for linear interpolation."""

    def __init__(self, message: str, singular_values: Any = None):
        self.singular_values = singular_values
        details = {}
        if singular_values is not None:
            details["singular_values"] = [float(s) for s in singular_values]
        super().__init__(message, details)


class DimensionMismatchError(SimplexGradError):
    """Inputs disagree in shape or dimension."""

    pass


class DegenerateDirectionsError(SimplexGradError):
    """Direction vectors do not span a hyperplane."""

    pass


class NonpositiveStepError(SimplexGradError):
    """Finite-difference step must be strictly positive."""

    pass


class DegenerateRangeError(SimplexGradError):
    """Scaling range has upper == lower in some coordinate."""

    pass


class AsymmetricHessianError(SimplexGradError):
    """Prescribed Hessian is not symmetric."""

    pass


class DimensionTooLargeError(SimplexGradError):
    """Exhaustive enumeration requested beyond its cap."""

    pass


class ZeroLipschitzError(SimplexGradError):
    """Lipschitz constant must be positive for this operation."""

    pass


class DegenerateCandidateError(SimplexGradError):
    """Candidate lies on the anchor hyperplane; its bound is unbounded."""

    def __init__(self, message: str, distance: float | None = None):
        self.value = BOUND_SENTINEL
        self.distance = distance
        details = {} if distance is None else {"distance": distance}
        super().__init__(message, details)


class InfeasibleSubproblemError(SimplexGradError):
    """No feasible start was found for a half-space subproblem."""

    pass


class BothSidesInfeasibleError(SimplexGradError):
    """Neither half-space subproblem admits a feasible point."""

    def __init__(self, message: str, trace: Any = None, details: dict[str, Any] | None = None):
        self.trace = trace
        super().__init__(message, details)


class ConfigError(SimplexGradError):
    """Malformed configuration or input file."""

    pass


class GoldenMismatchError(SimplexGradError):
    """A reproduced value disagrees with its published counterpart."""

    pass

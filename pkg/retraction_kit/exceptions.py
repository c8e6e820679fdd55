"""
Retraction Kit Exception Classes
================================

Exceptions for numerical failures, invalid input and experiment errors.
"""

from typing import TYPE_CHECKING, Any, Dict, Optional

if TYPE_CHECKING:
    from retraction_kit.models import RetractionOutcome


class RetractionKitError(Exception):
    """Base exception for all retraction kit errors."""

    def __init__(
        self,
        message: str,
        code: Optional[str] = None,
        details: Optional[Dict[str, Any]] = None,
    ):
        self.message = message
        self.code = code
        self.details = details or {}
        super().__init__(self.message)

    def __str__(self) -> str:
        parts = [self.message]
        if self.code:
            parts.append(f"Code: {self.code}")
        for key in sorted(self.details):
            parts.append(f"{key}: {self.details[key]}")
        return " | ".join(parts)


class RankDeficientError(RetractionKitError):
    """
    Raised when the Jacobian loses full row rank.

    Common causes:
    - The iterate reached a critical point of F (e.g. the origin for a sphere)
    - The constraint map has redundant components

    Solution:
    - Use a smaller tangent vector
    - Remove redundant constraints (see OrthoColumns, which keeps only the upper triangle)
    """

    def __init__(self, message: str = "Jacobian is rank deficient", **kwargs):
        kwargs.setdefault("code", "RANK_DEFICIENT")
        super().__init__(message, **kwargs)


class SingularError(RetractionKitError):
    """
    Raised when a square linear system is numerically singular.

    Common causes:
    - J(x) J(x₀)ᵀ degenerates along an orthographic iteration
    - The augmented matrix [J; V] is not invertible
    """

    def __init__(self, message: str = "Matrix is numerically singular", **kwargs):
        kwargs.setdefault("code", "SINGULAR")
        super().__init__(message, **kwargs)


class NoConvergenceError(RetractionKitError):
    """
    Raised when an iteration diverges or oscillates without converging.

    Common causes:
    - The affine space x + v + N_x misses the manifold (orthographic retraction)
    - The starting point lies outside the Newton convergence region
    """

    def __init__(self, message: str = "Iteration did not converge", **kwargs):
        kwargs.setdefault("code", "NO_CONVERGENCE")
        super().__init__(message, **kwargs)


class ExceededMaxIterError(RetractionKitError):
    """
    Raised when an iteration is still contracting at the iteration cap.

    Solution:
    - Raise max_iter in RetractionConfig
    - Loosen the convergence threshold c0
    """

    def __init__(self, message: str = "Maximum number of iterations exceeded", **kwargs):
        kwargs.setdefault("code", "EXCEEDED_MAX_ITER")
        super().__init__(message, **kwargs)


class NotLocalMinError(RetractionKitError):
    """Raised when a projective stationary point is not a local minimum of the distance."""

    def __init__(self, message: str = "Stationary point is not a local minimum", **kwargs):
        kwargs.setdefault("code", "NOT_LOCAL_MIN")
        super().__init__(message, **kwargs)


class ProjectionFailedError(RetractionKitError):
    """Raised when the per-step projection of a geodesic integrator fails."""

    def __init__(self, message: str = "Projection onto the manifold failed", **kwargs):
        kwargs.setdefault("code", "PROJECTION_FAILED")
        super().__init__(message, **kwargs)


class InsufficientDataError(RetractionKitError):
    """
    Raised when a fit has too few usable data points.

    Common causes:
    - Distances underflow below the fit window
    - The method failed on too many rungs of the ladder
    """

    def __init__(self, message: str = "Not enough usable data", **kwargs):
        kwargs.setdefault("code", "INSUFFICIENT_DATA")
        super().__init__(message, **kwargs)


class UnsupportedManifoldError(RetractionKitError):
    """Raised when an operation has no implementation for the given manifold."""

    def __init__(self, message: str = "Operation not supported on this manifold", **kwargs):
        kwargs.setdefault("code", "UNSUPPORTED_MANIFOLD")
        super().__init__(message, **kwargs)


class ValidationError(RetractionKitError, ValueError):
    """
    Raised when an argument violates a precondition.

    Common causes:
    - Non-positive magnitude or convergence threshold
    - Vector dimensions that do not match the ambient space
    - Malformed manifold spec strings
    """

    def __init__(self, message: str, **kwargs):
        kwargs.setdefault("code", "INVALID_ARGUMENT")
        super().__init__(message, **kwargs)


class OffManifoldError(ValidationError):
    """Raised when a point does not satisfy F(x) ≈ 0 within TOL_MANIFOLD."""

    def __init__(self, message: str = "Point is not on the manifold", **kwargs):
        kwargs.setdefault("code", "OFF_MANIFOLD")
        super().__init__(message, **kwargs)


class ConfigError(ValidationError):
    """
    Raised when an experiment configuration cannot be resolved.

    Carries the offending field and, for config files, the line number.
    """

    def __init__(
        self,
        message: str,
        field: Optional[str] = None,
        line: Optional[int] = None,
        **kwargs,
    ):
        kwargs.setdefault("code", "CONFIG_ERROR")
        details = dict(kwargs.pop("details", None) or {})
        if field is not None:
            details["field"] = field
        if line is not None:
            details["line"] = line
        super().__init__(message, details=details, **kwargs)
        self.field = field
        self.line = line


class ExperimentError(RetractionKitError):
    """Raised by the experiment runner when a module-level failure aborts a run."""

    def __init__(
        self,
        message: str,
        cause: Optional[BaseException] = None,
        **kwargs,
    ):
        kwargs.setdefault("code", "EXPERIMENT_FAILED")
        super().__init__(message, **kwargs)
        self.cause = cause


# Status code to exception class mapping
ERROR_CODE_MAP = {
    "RANK_DEFICIENT": RankDeficientError,
    "SINGULAR": SingularError,
    "NO_CONVERGENCE": NoConvergenceError,
    "EXCEEDED_MAX_ITER": ExceededMaxIterError,
    "NOT_LOCAL_MIN": NotLocalMinError,
    "PROJECTION_FAILED": ProjectionFailedError,
}


def raise_for_status(outcome: "RetractionOutcome") -> None:
    """
    Raise the exception matching a failed retraction outcome.

    Args:
        outcome: Result of any retraction

    Raises:
        RetractionKitError: Or a more specific subclass based on the outcome status
    """
    if outcome.converged:
        return

    code = outcome.status.value
    exception_class = ERROR_CODE_MAP.get(code, RetractionKitError)

    raise exception_class(
        message=outcome.message or f"{outcome.method} retraction failed",
        code=code,
        details={"method": outcome.method, "iterations": outcome.iterations},
    )

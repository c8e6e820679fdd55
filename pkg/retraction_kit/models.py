"""
Retraction Kit Data Models
==========================

Dataclass records shared by the numerical modules and the experiment runner.
Vectors are float64 numpy arrays; `to_dict` converts them to plain lists.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple, Union

import numpy as np

from retraction_kit.exceptions import OffManifoldError, ValidationError, raise_for_status

# ============================================================================
# Tolerances
# ============================================================================

TOL_MANIFOLD = 1e-9
TOL_TANGENT = 1e-8
RANK_TOL = 1e-10  # relative to the largest singular value
FD_STEP = 1e-5


# ============================================================================
# Enums
# ============================================================================

class Status(str, Enum):
    """Termination cause of a retraction."""
    CONVERGED = "CONVERGED"
    NO_CONVERGENCE = "NO_CONVERGENCE"
    RANK_DEFICIENT = "RANK_DEFICIENT"
    SINGULAR = "SINGULAR"
    NOT_LOCAL_MIN = "NOT_LOCAL_MIN"
    EXCEEDED_MAX_ITER = "EXCEEDED_MAX_ITER"


class RetractionMethod(str, Enum):
    """Retraction algorithms."""
    NEWTON = "newton"
    ORTHOGRAPHIC = "orthographic"
    PROJECTIVE = "projective"
    MODIFIED_NEWTON = "modified_newton"
    CHORD_ORTHOGRAPHIC = "chord_orthographic"
    OBLIQUE_CONTROL = "oblique_control"

    @classmethod
    def parse(cls, value: Union[str, "RetractionMethod"]) -> "RetractionMethod":
        """Resolve a method from its value or a common alias."""
        if isinstance(value, RetractionMethod):
            return value
        key = value.strip().lower().replace("-", "_")
        key = _METHOD_ALIASES.get(key, key)
        try:
            return cls(key)
        except ValueError:
            raise ValidationError(
                f"Unknown retraction method '{value}'",
                details={"choices": ", ".join(m.value for m in cls)},
            ) from None


_METHOD_ALIASES = {
    "nr": "newton",
    "mnr": "modified_newton",
    "orthographic_retraction": "orthographic",
    "chord": "chord_orthographic",
    "oblique": "oblique_control",
}


class ReferenceKind(str, Enum):
    """Which exponential map serves as the reference in order fits."""
    AUTO = "auto"
    ANALYTIC = "analytic"
    NUMERIC = "numeric"


class ExperimentKind(str, Enum):
    """Experiments the command-line runner can execute."""
    RETRACT = "retract"
    ORDER = "order"
    GAP = "gap"
    REGION = "region"
    COST = "cost"
    RATES = "rates"
    LEMMA = "lemma"
    GEODESIC = "geodesic"
    COMPARE = "compare"


class OutputFormat(str, Enum):
    """Result table formats."""
    CSV = "csv"
    JSON = "json"


# ============================================================================
# Points and Tangent Vectors
# ============================================================================

@dataclass
class ManifoldPoint:
    """An ambient point satisfying F(x) ≈ 0."""
    coords: np.ndarray
    residual: float

    def __post_init__(self) -> None:
        self.coords = np.asarray(self.coords, dtype=float)
        if not np.isfinite(self.residual) or self.residual > TOL_MANIFOLD:
            raise OffManifoldError(
                details={"residual": f"{self.residual:.3e}", "tolerance": TOL_MANIFOLD},
            )

    def to_dict(self) -> Dict[str, Any]:
        return {"coords": self.coords.tolist(), "residual": float(self.residual)}


@dataclass
class TangentVector:
    """An ambient vector v with J(base) v ≈ 0."""
    base: ManifoldPoint
    direction: np.ndarray

    def __post_init__(self) -> None:
        self.direction = np.asarray(self.direction, dtype=float)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.direction))

    def to_dict(self) -> Dict[str, Any]:
        return {"base": self.base.to_dict(), "direction": self.direction.tolist()}


# ============================================================================
# Retraction Models
# ============================================================================

@dataclass
class RetractionConfig:
    """Stopping rule shared by every Newton-type loop."""
    c0: float = 1e-10
    max_iter: int = 50
    divergence_window: int = 5
    record_path: bool = False

    def __post_init__(self) -> None:
        if not self.c0 > 0:
            raise ValidationError("c0 must be positive", details={"c0": self.c0})
        if self.max_iter < 1:
            raise ValidationError("max_iter must be positive", details={"max_iter": self.max_iter})
        if self.divergence_window < 1:
            raise ValidationError(
                "divergence_window must be positive",
                details={"divergence_window": self.divergence_window},
            )

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "RetractionConfig":
        return cls(
            c0=float(data.get("c0", 1e-10)),
            max_iter=int(data.get("max_iter", 50)),
            divergence_window=int(data.get("divergence_window", 5)),
            record_path=bool(data.get("record_path", False)),
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "c0": self.c0,
            "max_iter": self.max_iter,
            "divergence_window": self.divergence_window,
            "record_path": self.record_path,
        }


@dataclass
class RetractionOutcome:
    """Result point plus per-iteration diagnostics of one retraction."""
    method: str
    status: Status
    final_coords: np.ndarray
    iterations: int = 0
    residual_history: List[float] = field(default_factory=list)
    history_label: str = "step_norm"
    solver_ops: float = 0.0
    point: Optional[ManifoldPoint] = None
    message: Optional[str] = None
    path: Optional[List[np.ndarray]] = None

    @property
    def converged(self) -> bool:
        return self.status == Status.CONVERGED

    def raise_for_status(self) -> None:
        """Raise the exception matching a failed status."""
        raise_for_status(self)

    def to_dict(self) -> Dict[str, Any]:
        data = {
            "method": self.method,
            "status": self.status.value,
            "iterations": self.iterations,
            "residual_history": list(self.residual_history),
            "history_label": self.history_label,
            "solver_ops": self.solver_ops,
            "final_coords": self.final_coords.tolist(),
            "point": self.point.to_dict() if self.point is not None else None,
        }
        if self.message:
            data["message"] = self.message
        return data


# ============================================================================
# Geodesic Models
# ============================================================================

@dataclass
class GeodesicResult:
    """Time-one point of a numerically integrated geodesic."""
    endpoint: ManifoldPoint
    end_velocity: np.ndarray
    steps: int
    max_drift: float
    max_correction: float = 0.0

    def to_dict(self) -> Dict[str, Any]:
        return {
            "endpoint": self.endpoint.to_dict(),
            "end_velocity": self.end_velocity.tolist(),
            "steps": self.steps,
            "max_drift": self.max_drift,
            "max_correction": self.max_correction,
        }


# ============================================================================
# Analysis Models
# ============================================================================

@dataclass
class OrderEstimate:
    """Log-log fit of a distance against a stepsize ladder."""
    slope: float
    intercept: float
    r_squared: float
    ladder: List[Tuple[float, float]]
    used: int = 0

    @property
    def leading_constant(self) -> float:
        """Coefficient C in d ≈ C tᵖ."""
        return float(np.exp(self.intercept))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "slope": self.slope,
            "intercept": self.intercept,
            "r_squared": self.r_squared,
            "leading_constant": self.leading_constant,
            "used": self.used,
            "ladder": [list(pair) for pair in self.ladder],
        }


@dataclass
class RegionCell:
    """One (base point, direction, magnitude) cell of a region scan."""
    base_index: int
    direction_index: int
    magnitude: float
    statuses: Dict[str, Status]
    iterations: Dict[str, int] = field(default_factory=dict)
    solver_ops: Dict[str, float] = field(default_factory=dict)

    def succeeded(self, method: str) -> bool:
        return self.statuses[method] == Status.CONVERGED


@dataclass
class RegionScan:
    """Per-method convergence status over a grid of tangent vectors."""
    manifold: str
    methods: List[str]
    magnitudes: List[float]
    cells: List[RegionCell]
    success_counts: Dict[str, List[int]]
    anomalies: Dict[str, int]

    @property
    def cells_per_bucket(self) -> int:
        return len(self.cells) // max(1, len(self.magnitudes))

    def nesting_violations(self, inner: str, outer: str) -> List[RegionCell]:
        """Cells where `inner` converges but `outer` does not."""
        return [
            cell for cell in self.cells
            if cell.succeeded(inner) and not cell.succeeded(outer)
        ]


@dataclass
class MethodCost:
    """Aggregate cost of one method over matched samples."""
    method: str
    samples: int
    failures: int
    mean_iterations: float
    max_iterations: int
    mean_solver_ops: float
    mean_ops_per_iteration: float

    @property
    def failure_rate(self) -> float:
        return self.failures / self.samples if self.samples else 0.0

    def to_dict(self) -> Dict[str, Any]:
        return {
            "method": self.method,
            "samples": self.samples,
            "failures": self.failures,
            "failure_rate": self.failure_rate,
            "mean_iterations": self.mean_iterations,
            "max_iterations": self.max_iterations,
            "mean_solver_ops": self.mean_solver_ops,
            "mean_ops_per_iteration": self.mean_ops_per_iteration,
        }


@dataclass
class CostProfile:
    """Matched-pair comparison of Newton and orthographic retraction."""
    methods: List[MethodCost]
    matched_pairs: int
    iteration_violations: int
    max_iteration_excess: int

    def get(self, method: str) -> MethodCost:
        for cost in self.methods:
            if cost.method == method:
                return cost
        raise KeyError(method)


@dataclass
class LemmaTrialReport:
    """Outcome of randomized checks of ‖J†‖ ≤ ‖[J; V]⁻¹‖."""
    trials: int
    violations: int
    max_gap: float
    n: Optional[int] = None
    c: Optional[int] = None
    complement: bool = True

    def to_dict(self) -> Dict[str, Any]:
        return {
            "trials": self.trials,
            "violations": self.violations,
            "max_gap": self.max_gap,
            "n": self.n,
            "c": self.c,
            "complement": self.complement,
        }


@dataclass
class ComparisonRow:
    """Measured order, stability and cost of one method."""
    method: str
    order_slope: float
    success_rate: float
    max_converged_magnitude: float
    mean_iterations: float
    mean_solver_ops: float

    def to_dict(self) -> Dict[str, Any]:
        return {
            "method": self.method,
            "order_slope": self.order_slope,
            "success_rate": self.success_rate,
            "max_converged_magnitude": self.max_converged_magnitude,
            "mean_iterations": self.mean_iterations,
            "mean_solver_ops": self.mean_solver_ops,
        }

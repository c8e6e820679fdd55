"""
Retraction Kit
==============

Retractions on constraint manifolds F⁻¹(0) ⊂ ℝⁿ and the experiments that
compare them.

This library provides:
- Constraint maps and built-in test manifolds (circle, sphere, ellipse,
  ellipsoid, torus, orthonormal columns)
- Newton, orthographic, projective, modified Newton, chord and oblique
  retractions with uniform diagnostics
- Reference exponential maps (closed form and projected RK4)
- Order, convergence-region, cost and contraction-rate measurements

Quick Start:
    >>> from retraction_kit import RetractionKit
    >>> kit = RetractionKit("ellipse:2,1")
    >>> outcome = kit.retractions.newton(kit.points.anchor(), kit.points.canonical_tangent())
    >>> outcome.converged
    True
"""

__version__ = "1.0.0"

from retraction_kit.exceptions import (  # noqa: E402
    ConfigError,
    ExperimentError,
    InsufficientDataError,
    NoConvergenceError,
    RankDeficientError,
    RetractionKitError,
    SingularError,
    ValidationError,
)
from retraction_kit.manifolds import ConstraintMap, BuiltinManifold, parse_manifold  # noqa: E402
from retraction_kit.models import (  # noqa: E402
    ManifoldPoint,
    OrderEstimate,
    RetractionConfig,
    RetractionMethod,
    RetractionOutcome,
    Status,
    TangentVector,
)
from retraction_kit.retractions import retract  # noqa: E402
from retraction_kit.toolkit import RetractionKit  # noqa: E402

__all__ = [
    "RetractionKit",
    "ConstraintMap",
    "BuiltinManifold",
    "parse_manifold",
    "retract",
    "ManifoldPoint",
    "TangentVector",
    "RetractionConfig",
    "RetractionMethod",
    "RetractionOutcome",
    "OrderEstimate",
    "Status",
    "RetractionKitError",
    "RankDeficientError",
    "SingularError",
    "NoConvergenceError",
    "InsufficientDataError",
    "ValidationError",
    "ConfigError",
    "ExperimentError",
]

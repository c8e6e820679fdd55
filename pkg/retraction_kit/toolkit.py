"""
Retraction Kit Facade
=====================

One object bound to a manifold, a stopping rule and a thread budget, giving
access to every operation through topic sub-APIs.
"""

import logging
from typing import Optional, Union

from retraction_kit.analysis import resolve_threads
from retraction_kit.api.analysis import AnalysisAPI
from retraction_kit.api.geodesics import GeodesicsAPI
from retraction_kit.api.manifold import ManifoldAPI
from retraction_kit.api.retractions import RetractionsAPI
from retraction_kit.exceptions import ValidationError
from retraction_kit.manifolds import ConstraintMap, parse_manifold
from retraction_kit.models import RetractionConfig

logger = logging.getLogger(__name__)


class RetractionKit:
    """
    Main entry point for library use.

    Example:
        >>> kit = RetractionKit("circle")
        >>>
        >>> # Retract a tangent vector
        >>> outcome = kit.retractions.newton([1, 0], [0, 0.5])
        >>> print(outcome.status, outcome.iterations)
        >>>
        >>> # Measure the approximation order
        >>> est = kit.analysis.order("projective")
        >>> print(f"slope {est.slope:.2f}, constant {est.leading_constant:.3f}")
        >>>
        >>> # A custom constraint map works the same way
        >>> kit = RetractionKit(ConstraintMap(ambient_dim=3, codim=1, eval_fn=f, jacobian_fn=jac))

    Args:
        manifold: Builtin spec string (e.g. "ellipse:2,1") or a ConstraintMap
        config: Stopping rule for every retraction (default RetractionConfig())
        threads: Worker threads for scans and profiles, capped by RETRACTION_KIT_THREADS

    Attributes:
        points: Points, tangent vectors and norm bounds
        retractions: The six retraction methods
        geodesics: Exponential maps and distances
        analysis: Order, region, cost and rate experiments
    """

    def __init__(
        self,
        manifold: Union[str, ConstraintMap] = "circle",
        config: Optional[RetractionConfig] = None,
        threads: Optional[int] = None,
    ):
        if isinstance(manifold, str):
            manifold = parse_manifold(manifold)
        if not isinstance(manifold, ConstraintMap):
            raise ValidationError(
                "manifold must be a spec string or a ConstraintMap",
                details={"type": type(manifold).__name__},
            )
        self.manifold = manifold
        self.config = config or RetractionConfig()
        self.threads = resolve_threads(threads)

        self.points = ManifoldAPI(self)
        self.retractions = RetractionsAPI(self)
        self.geodesics = GeodesicsAPI(self)
        self.analysis = AnalysisAPI(self)
        logger.debug(f"RetractionKit on {manifold.label} with {self.threads} threads")

    def __repr__(self) -> str:
        return f"RetractionKit(manifold={self.manifold.label!r}, threads={self.threads})"

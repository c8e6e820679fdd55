"""
Base API Module
===============

Base class for all facade modules with shared functionality.
"""

from typing import TYPE_CHECKING, Optional

from retraction_kit.manifolds import ConstraintMap, PointLike, as_point
from retraction_kit.models import ManifoldPoint, RetractionConfig

if TYPE_CHECKING:
    from retraction_kit.toolkit import RetractionKit


class BaseAPI:
    """Base class for facade modules."""

    def __init__(self, kit: "RetractionKit"):
        self._kit = kit

    @property
    def _F(self) -> ConstraintMap:
        return self._kit.manifold

    def _config(self, cfg: Optional[RetractionConfig] = None) -> RetractionConfig:
        """Per-call stopping rule, falling back to the kit's."""
        return cfg or self._kit.config

    @property
    def _threads(self) -> Optional[int]:
        return self._kit.threads

    def _point(self, x: Optional[PointLike] = None) -> ManifoldPoint:
        """Validated base point, defaulting to the manifold's anchor."""
        return self._F.anchor_point() if x is None else as_point(self._F, x)

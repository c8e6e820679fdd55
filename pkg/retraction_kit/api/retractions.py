"""
Retractions API Module
======================

Retractions on the kit's manifold with the kit's stopping rule.
"""

from typing import Optional, Union

import numpy as np

from retraction_kit.api.base import BaseAPI
from retraction_kit.manifolds import PointLike, VectorLike
from retraction_kit.models import RetractionConfig, RetractionMethod, RetractionOutcome
from retraction_kit.retractions import (
    DEFAULT_TILT_DEGREES,
    project_newton,
    retract,
    tilted_direction,
)


class RetractionsAPI(BaseAPI):
    """
    Retraction methods.

    Use these methods to:
    - Retract a tangent vector with any of the six methods
    - Project an arbitrary ambient point with the Newton limit map

    Example:
        >>> kit = RetractionKit("circle")
        >>> kit.retractions.newton([1, 0], [0, 0.5]).point.coords.round(6)
        array([0.894427, 0.447214])
        >>> kit.retractions.orthographic([1, 0], [0, 1.2]).status
        <Status.NO_CONVERGENCE: 'NO_CONVERGENCE'>
    """

    def retract(
        self,
        method: Union[str, RetractionMethod],
        x: PointLike,
        v: VectorLike,
        cfg: Optional[RetractionConfig] = None,
        **kwargs,
    ) -> RetractionOutcome:
        return retract(method, self._F, x, v, self._config(cfg), **kwargs)

    def newton(
        self, x: PointLike, v: VectorLike, cfg: Optional[RetractionConfig] = None
    ) -> RetractionOutcome:
        return self.retract(RetractionMethod.NEWTON, x, v, cfg)

    def orthographic(
        self, x: PointLike, v: VectorLike, cfg: Optional[RetractionConfig] = None
    ) -> RetractionOutcome:
        return self.retract(RetractionMethod.ORTHOGRAPHIC, x, v, cfg)

    def projective(
        self, x: PointLike, v: VectorLike, cfg: Optional[RetractionConfig] = None
    ) -> RetractionOutcome:
        return self.retract(RetractionMethod.PROJECTIVE, x, v, cfg)

    def modified_newton(
        self, x: PointLike, v: VectorLike, cfg: Optional[RetractionConfig] = None
    ) -> RetractionOutcome:
        return self.retract(RetractionMethod.MODIFIED_NEWTON, x, v, cfg)

    def chord_orthographic(
        self, x: PointLike, v: VectorLike, cfg: Optional[RetractionConfig] = None
    ) -> RetractionOutcome:
        return self.retract(RetractionMethod.CHORD_ORTHOGRAPHIC, x, v, cfg)

    def oblique_control(
        self,
        x: PointLike,
        v: VectorLike,
        w: Optional[np.ndarray] = None,
        angle_degrees: float = DEFAULT_TILT_DEGREES,
        cfg: Optional[RetractionConfig] = None,
    ) -> RetractionOutcome:
        """Oblique projection along w, by default tilted `angle_degrees` off the normal."""
        if w is None:
            w = tilted_direction(self._F, x, angle_degrees)
        return self.retract(RetractionMethod.OBLIQUE_CONTROL, x, v, cfg, w=w)

    def project(self, y: PointLike, cfg: Optional[RetractionConfig] = None) -> RetractionOutcome:
        """Newton limit map of an arbitrary ambient point."""
        return project_newton(self._F, y, self._config(cfg))

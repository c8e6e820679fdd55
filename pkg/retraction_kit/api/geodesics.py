"""
Geodesics API Module
====================
"""

from typing import Sequence, Union

import numpy as np

from retraction_kit.api.base import BaseAPI
from retraction_kit.geodesics import (
    estimate_integrator_order,
    exp_analytic,
    exp_numeric,
    exp_reference,
    geodesic_distance,
)
from retraction_kit.manifolds import PointLike, VectorLike
from retraction_kit.models import GeodesicResult, ManifoldPoint, OrderEstimate, ReferenceKind


class GeodesicsAPI(BaseAPI):
    """Exponential maps and distances on the kit's manifold."""

    def exp(self, x: PointLike, v: VectorLike, n_steps: int = 100) -> GeodesicResult:
        return exp_numeric(self._F, x, v, n_steps)

    def exp_analytic(self, x: PointLike, v: VectorLike) -> ManifoldPoint:
        return exp_analytic(self._F, x, v)

    def reference(
        self, x: PointLike, v: VectorLike, kind: Union[str, ReferenceKind] = ReferenceKind.AUTO
    ) -> np.ndarray:
        return exp_reference(self._F, x, v, kind)

    def distance(self, p: PointLike, q: PointLike) -> float:
        return geodesic_distance(self._F, p, q)

    def integrator_order(
        self, x: PointLike, v: VectorLike, n_steps_list: Sequence[int] = (25, 50, 100, 200)
    ) -> OrderEstimate:
        return estimate_integrator_order(self._F, x, v, n_steps_list)

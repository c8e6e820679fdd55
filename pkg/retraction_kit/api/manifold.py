"""
Manifold API Module
===================

Points, tangent vectors and norm bounds on the kit's manifold.
"""

from typing import Optional, Tuple, Union

import numpy as np

from retraction_kit.api.base import BaseAPI
from retraction_kit.manifolds import (
    ArrayLike,
    PointLike,
    augmented_inverse_norm,
    canonical_tangent,
    check_jacobian,
    make_point,
    make_tangent,
    newton_step,
    normal_complement,
    pseudoinverse_norm,
    random_tangent,
    tangent_project,
)
from retraction_kit.models import ManifoldPoint, TangentVector


class ManifoldAPI(BaseAPI):
    """
    Tangent and normal space operations.

    Example:
        >>> kit = RetractionKit("sphere:3")
        >>> v = kit.points.project([0, 0, 1], [1, 2, 5])
        >>> v.direction
        array([1., 2., 0.])
    """

    def point(self, coords: ArrayLike) -> ManifoldPoint:
        """Validate coordinates as a point on the manifold."""
        return make_point(self._F, coords)

    def anchor(self) -> ManifoldPoint:
        return self._F.anchor_point()

    def sample(self, seed: Union[int, np.random.Generator, None] = None) -> ManifoldPoint:
        """Random point from the manifold's sampler."""
        return make_point(self._F, self._F.sample_point(np.random.default_rng(seed)))

    def tangent(self, x: PointLike, v: ArrayLike) -> TangentVector:
        return make_tangent(self._F, x, v)

    def project(self, x: PointLike, w: ArrayLike) -> TangentVector:
        """Orthogonal projection of w onto the tangent space at x."""
        return tangent_project(self._F, x, w)

    def random_tangent(
        self,
        magnitude: float,
        x: Optional[PointLike] = None,
        seed: Union[int, np.random.Generator, None] = None,
    ) -> TangentVector:
        return random_tangent(self._F, self._point(x), magnitude, seed)

    def canonical_tangent(self, x: Optional[PointLike] = None) -> np.ndarray:
        return canonical_tangent(self._F, self._point(x))

    def newton_step(self, x: ArrayLike) -> Tuple[np.ndarray, float]:
        """Minimum-norm Newton step and its solver operation count."""
        return newton_step(self._F, x)

    def pseudoinverse_norm(self, x: Optional[PointLike] = None) -> float:
        return pseudoinverse_norm(self._F, self._point(x))

    def augmented_inverse_norm(
        self, x: Optional[PointLike] = None, V: Optional[np.ndarray] = None
    ) -> float:
        """‖[J(x); V]⁻¹‖, with V the orthonormal complement of J's rows by default."""
        point = self._point(x)
        if V is None:
            V = normal_complement(self._F.jacobian(point.coords))
        return augmented_inverse_norm(self._F, point, V)

    def check_jacobian(self, x: Optional[PointLike] = None) -> float:
        return check_jacobian(self._F, self._point(x).coords)

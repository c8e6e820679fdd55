"""
Analysis API Module
===================

Experiment drivers on the kit's manifold, stopping rule and thread budget.
"""

from typing import List, Optional, Sequence, Union

from retraction_kit import analysis
from retraction_kit.api.base import BaseAPI
from retraction_kit.manifolds import PointLike, VectorLike
from retraction_kit.models import (
    ComparisonRow,
    CostProfile,
    LemmaTrialReport,
    OrderEstimate,
    ReferenceKind,
    RegionScan,
    RetractionMethod,
)

Method = Union[str, RetractionMethod]


class AnalysisAPI(BaseAPI):
    """
    Order, region, cost and rate measurements.

    Example:
        >>> kit = RetractionKit("ellipse:2,1", threads=4)
        >>> scan = kit.analysis.scan_region(["newton", "orthographic"], seed=1)
        >>> scan.success_counts["newton"][-1] >= scan.success_counts["orthographic"][-1]
        True
    """

    def order(
        self,
        method: Method,
        x: Optional[PointLike] = None,
        v: Optional[VectorLike] = None,
        t_ladder: Optional[Sequence[float]] = None,
        reference: Union[str, ReferenceKind] = ReferenceKind.AUTO,
        **method_kwargs,
    ) -> OrderEstimate:
        """Order of a retraction at x (default anchor) along v (default canonical tangent)."""
        point = self._point(x)
        if v is None:
            v = self._kit.points.canonical_tangent(point)
        return analysis.estimate_order(
            self._F, point, v, method, t_ladder, reference, self._config(), **method_kwargs
        )

    def gap_order(
        self,
        method_a: Method = RetractionMethod.NEWTON,
        method_b: Method = RetractionMethod.PROJECTIVE,
        x: Optional[PointLike] = None,
        v: Optional[VectorLike] = None,
        t_ladder: Optional[Sequence[float]] = None,
    ) -> OrderEstimate:
        point = self._point(x)
        if v is None:
            v = self._kit.points.canonical_tangent(point)
        return analysis.estimate_gap_order(
            self._F, point, v, method_a, method_b, t_ladder, self._config()
        )

    def scan_region(
        self,
        methods: Sequence[Method],
        base_points: Union[int, Sequence[PointLike]] = 32,
        n_directions: int = 2,
        magnitudes: Sequence[float] = analysis.DEFAULT_REGION_MAGNITUDES,
        seed: int = 0,
    ) -> RegionScan:
        return analysis.scan_region(
            self._F, methods, base_points, n_directions, magnitudes,
            cfg=self._config(), seed=seed, threads=self._threads,
        )

    def profile_cost(
        self, count: int = 100, max_magnitude: float = 0.5, seed: int = 0
    ) -> CostProfile:
        """Newton against orthographic over random pairs with ‖v‖ ≤ max_magnitude."""
        samples = analysis.sample_tangent_pairs(self._F, count, max_magnitude, seed)
        return analysis.profile_cost(self._F, samples, self._config(), threads=self._threads)

    def rate_exponent(
        self,
        method: Method,
        v_magnitudes: Sequence[float],
        x: Optional[PointLike] = None,
        direction: Optional[VectorLike] = None,
    ) -> float:
        return analysis.estimate_rate_exponent(
            self._F, self._point(x), method, v_magnitudes, direction
        )

    def lemma_trials(
        self,
        n: Optional[int] = None,
        c: Optional[int] = None,
        n_trials: int = 1000,
        seed: int = 0,
        complement: bool = True,
    ) -> LemmaTrialReport:
        return analysis.lemma_ajnf_trial(n, c, n_trials, seed, complement)

    def compare(self, methods: Sequence[Method], seed: int = 0, **kwargs) -> List[ComparisonRow]:
        return analysis.compare_methods(
            self._F, methods, cfg=self._config(), seed=seed, threads=self._threads, **kwargs
        )

"""
Geodesics
=========

Reference exponential maps for order measurements: closed form on the circle
and spheres, a projected Runge-Kutta integrator elsewhere.
"""

import logging
import math
from typing import Sequence, Union

import numpy as np

from retraction_kit.exceptions import (
    ProjectionFailedError,
    RankDeficientError,
    UnsupportedManifoldError,
    ValidationError,
)
from retraction_kit.manifolds import (
    ConstraintMap,
    PointLike,
    VectorLike,
    as_coords,
    as_direction,
    as_point,
    make_point,
    solve_spd,
    tangent_project,
)
from retraction_kit.models import (
    GeodesicResult,
    ManifoldPoint,
    OrderEstimate,
    ReferenceKind,
    RetractionConfig,
)
from retraction_kit.retractions import project_newton

logger = logging.getLogger(__name__)

# Integrator steps per unit of ‖v‖ for the numeric reference, with a floor.
REFERENCE_STEPS_PER_UNIT = 100
REFERENCE_MIN_STEPS = 16

_PROJECTION_CONFIG = RetractionConfig(c0=1e-13, max_iter=20)


def exp_analytic(F: ConstraintMap, x: PointLike, v: VectorLike) -> ManifoldPoint:
    """
    Great-circle exponential map cos(‖v‖) x + sin(‖v‖) v/‖v‖.

    Raises:
        UnsupportedManifoldError: On manifolds other than circle and sphere

    Example:
        >>> exp_analytic(sphere(3), [1.0, 0.0, 0.0], [0.0, np.pi / 2, 0.0]).coords.round(12)
        array([0., 1., 0.])
    """
    if not F.has_closed_form_geodesics:
        raise UnsupportedManifoldError(
            f"No closed-form exponential map on '{F.label}'",
            details={"manifold": F.label},
        )
    point = as_point(F, x)
    v = as_direction(F, v, base=point.coords)
    theta = float(np.linalg.norm(v))
    if theta == 0.0:
        return point
    coords = math.cos(theta) * point.coords + math.sin(theta) * (v / theta)
    return make_point(F, coords)


def _acceleration(F: ConstraintMap, p: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Normal acceleration −J†(p) (uᵀ ∇²F(p) u) keeping J(γ) γ' = 0."""
    J = F.jacobian(p)
    y, _ = solve_spd(J, F.second_derivative(p, u))
    return -(J.T @ y)


def exp_numeric(
    F: ConstraintMap,
    x: PointLike,
    v: VectorLike,
    n_steps: int = 100,
) -> GeodesicResult:
    """
    Integrate γ'' = −J†(γ)(γ'ᵀ ∇²F γ') over t ∈ [0, 1] with classical RK4.

    After every step the position is re-projected by the Newton limit map and
    the velocity by tangent_project, which keeps ‖F(γ)‖ at rounding level.

    Args:
        F: Constraint map
        x: Start point on the manifold
        v: Initial velocity (tangent at x)
        n_steps: Number of RK4 steps, step size 1/n_steps

    Returns:
        GeodesicResult with the time-one point and velocity

    Raises:
        ValidationError: If n_steps < 1
        ProjectionFailedError: If a per-step projection does not converge
    """
    if n_steps < 1:
        raise ValidationError("n_steps must be at least 1", details={"n_steps": n_steps})
    point = as_point(F, x)
    u = np.array(as_direction(F, v, base=point.coords), dtype=float)
    if not np.any(u):
        return GeodesicResult(
            endpoint=point, end_velocity=u, steps=0, max_drift=point.residual,
        )

    p = point.coords.copy()
    h = 1.0 / n_steps
    max_drift = point.residual
    max_correction = 0.0
    try:
        for step in range(n_steps):
            k1p, k1u = u, _acceleration(F, p, u)
            k2p, k2u = u + 0.5 * h * k1u, _acceleration(F, p + 0.5 * h * k1p, u + 0.5 * h * k1u)
            k3p, k3u = u + 0.5 * h * k2u, _acceleration(F, p + 0.5 * h * k2p, u + 0.5 * h * k2u)
            k4p, k4u = u + h * k3u, _acceleration(F, p + h * k3p, u + h * k3u)
            p_next = p + (h / 6.0) * (k1p + 2.0 * k2p + 2.0 * k3p + k4p)
            u_next = u + (h / 6.0) * (k1u + 2.0 * k2u + 2.0 * k3u + k4u)

            projected = project_newton(F, p_next, _PROJECTION_CONFIG)
            if not projected.converged:
                raise ProjectionFailedError(
                    details={"step": step, "status": projected.status.value},
                )
            correction = float(np.linalg.norm(projected.final_coords - p_next))
            max_correction = max(max_correction, correction)
            p = projected.final_coords
            u = tangent_project(F, projected.point, u_next).direction
            max_drift = max(max_drift, float(np.linalg.norm(F.eval(p))))
    except RankDeficientError as e:
        raise ProjectionFailedError(f"Jacobian lost rank along the geodesic: {e.message}") from e

    logger.debug(
        f"exp_numeric on {F.label}: {n_steps} steps, drift={max_drift:.2e}, "
        f"correction={max_correction:.2e}"
    )
    return GeodesicResult(
        endpoint=make_point(F, p),
        end_velocity=u,
        steps=n_steps,
        max_drift=max_drift,
        max_correction=max_correction,
    )


def reference_steps(v: np.ndarray) -> int:
    """Step count of the numeric reference: max(16, ceil(100·‖v‖))."""
    return max(REFERENCE_MIN_STEPS, math.ceil(REFERENCE_STEPS_PER_UNIT * float(np.linalg.norm(v))))


def exp_reference(
    F: ConstraintMap,
    x: PointLike,
    v: VectorLike,
    kind: Union[str, ReferenceKind] = ReferenceKind.AUTO,
) -> np.ndarray:
    """
    Coordinates of exp(x, v) from the requested reference.

    AUTO uses the closed form when the manifold has one, the integrator otherwise.
    """
    kind = ReferenceKind(kind)
    if kind == ReferenceKind.AUTO:
        kind = ReferenceKind.ANALYTIC if F.has_closed_form_geodesics else ReferenceKind.NUMERIC
    if kind == ReferenceKind.ANALYTIC:
        return exp_analytic(F, x, v).coords
    direction = as_direction(F, v)
    return exp_numeric(F, x, direction, n_steps=reference_steps(direction)).endpoint.coords


def geodesic_distance(F: ConstraintMap, p: PointLike, q: PointLike) -> float:
    """
    Arc length between p and q on circle and sphere, chordal distance elsewhere.

    The arc uses 2·arcsin(‖p − q‖/2), which keeps full relative accuracy for
    nearby points where arccos(p·q) loses it.

    Example:
        >>> geodesic_distance(circle(), [1.0, 0.0], [0.0, 1.0])
        1.5707963267948966
    """
    chord = float(np.linalg.norm(as_coords(F, p) - as_coords(F, q)))
    if F.has_closed_form_geodesics:
        return 2.0 * math.asin(min(1.0, 0.5 * chord))
    return chord


def estimate_integrator_order(
    F: ConstraintMap,
    x: PointLike,
    v: VectorLike,
    n_steps_list: Sequence[int] = (25, 50, 100, 200),
) -> OrderEstimate:
    """
    Order of exp_numeric: log-log slope of its error against step size 1/n_steps.

    Requires a closed-form exponential map for the error.
    """
    from retraction_kit.analysis import fit_order

    exact = exp_analytic(F, x, v).coords
    steps = sorted(int(s) for s in n_steps_list)
    hs = [1.0 / s for s in steps]
    errors = [
        float(np.linalg.norm(exp_numeric(F, x, v, n_steps=s).endpoint.coords - exact))
        for s in steps
    ]
    return fit_order(hs, errors)

"""
Retractions
===========

Newton-type retractions onto a constraint manifold, all driven by one
iteration loop so that iteration counts and solver costs are comparable.

- newton: minimum-norm Newton iteration from x + v, Jacobian refreshed
- orthographic: moves along the normal space at x only
- projective: closest point to x + v (Newton on the stationarity system)
- modified_newton: Jacobian frozen at x + v
- chord_orthographic: orthographic with the solve matrix frozen at x
- oblique_control: 1-D projection along a fixed oblique direction
"""

import logging
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np
from scipy import linalg

from retraction_kit.exceptions import RankDeficientError, SingularError, ValidationError
from retraction_kit.manifolds import (
    ConstraintMap,
    PointLike,
    VectorLike,
    as_coords,
    as_direction,
    as_point,
    canonical_tangent,
    cholesky_factor,
    gram_flops,
    lu_factor,
    make_tangent,
    matvec_flops,
    newton_step,
    solve_cross,
    triangular_flops,
)
from retraction_kit.models import (
    TOL_MANIFOLD,
    ManifoldPoint,
    RetractionConfig,
    RetractionMethod,
    RetractionOutcome,
    Status,
    TangentVector,
)

logger = logging.getLogger(__name__)

StepFn = Callable[[np.ndarray], Tuple[np.ndarray, float]]

# Iterates farther than this factor times (1 + ‖x‖) from the origin count as divergence.
_BLOW_UP = 1e8

# Reduced Hessian eigenvalues below this mark a saddle of the distance.
_LOCAL_MIN_TOL = -1e-8

DEFAULT_TILT_DEGREES = 30.0


# ============================================================================
# Iteration Loop
# ============================================================================

def _iterate(
    F: ConstraintMap,
    state0: np.ndarray,
    step_fn: StepFn,
    cfg: RetractionConfig,
    method: str,
    label: str = "step_norm",
    setup_ops: float = 0.0,
    project: Optional[Callable[[np.ndarray], np.ndarray]] = None,
) -> RetractionOutcome:
    """
    Run state ← state + δ until ‖δ‖ < c0 and the point lies on the manifold.

    Failure is returned as a status, never raised: region scans treat it as data.
    """
    to_point = project or (lambda s: s)
    state = np.array(state0, dtype=float)
    history: List[float] = []
    path = [to_point(state).copy()] if cfg.record_path else None
    ops = setup_ops
    limit = _BLOW_UP * (1.0 + float(np.linalg.norm(state)))
    increases = 0

    def finish(status: Status, message: Optional[str] = None,
               point: Optional[ManifoldPoint] = None) -> RetractionOutcome:
        if status != Status.CONVERGED:
            logger.debug(f"{method}: {status.value} after {len(history)} iterations")
        return RetractionOutcome(
            method=method,
            status=status,
            final_coords=to_point(state).copy(),
            iterations=len(history),
            residual_history=history,
            history_label=label,
            solver_ops=ops,
            point=point,
            message=message,
            path=path,
        )

    for k in range(1, cfg.max_iter + 1):
        try:
            delta, step_ops = step_fn(state)
        except RankDeficientError as e:
            return finish(Status.RANK_DEFICIENT, e.message)
        except SingularError as e:
            return finish(Status.SINGULAR, e.message)
        ops += step_ops

        norm = float(np.linalg.norm(delta))
        if not np.isfinite(norm):
            return finish(Status.NO_CONVERGENCE, "non-finite step")
        state = state + delta
        history.append(norm)
        if path is not None:
            path.append(to_point(state).copy())
        logger.debug(f"{method} iter {k}: {label}={norm:.3e}")

        if float(np.linalg.norm(state)) > limit:
            return finish(Status.NO_CONVERGENCE, "iterates diverged")

        if norm < cfg.c0:
            coords = to_point(state)
            residual = float(np.linalg.norm(F.eval(coords)))
            if residual <= TOL_MANIFOLD:
                return finish(
                    Status.CONVERGED, point=ManifoldPoint(coords=coords.copy(), residual=residual)
                )

        increases = increases + 1 if k > 1 and norm > history[-2] else 0
        if increases >= cfg.divergence_window:
            return finish(
                Status.NO_CONVERGENCE,
                f"step norm grew for {increases} consecutive iterations",
            )

    if _still_contracting(history, cfg.divergence_window):
        logger.warning(f"{method}: still contracting at max_iter={cfg.max_iter}")
        return finish(Status.EXCEEDED_MAX_ITER, f"max_iter={cfg.max_iter} reached")
    return finish(Status.NO_CONVERGENCE, f"no convergence within max_iter={cfg.max_iter}")


def _still_contracting(history: List[float], window: int) -> bool:
    tail = history[-window:]
    if len(tail) < 2:
        return False
    decreasing = all(b < a for a, b in zip(tail, tail[1:]))
    return decreasing and tail[-1] <= min(history)


def _trivial(method: str, point: ManifoldPoint, label: str = "step_norm") -> RetractionOutcome:
    return RetractionOutcome(
        method=method,
        status=Status.CONVERGED,
        final_coords=point.coords.copy(),
        history_label=label,
        point=point,
    )


def _prepare(
    F: ConstraintMap, x: PointLike, v: VectorLike, cfg: Optional[RetractionConfig]
) -> Tuple[ManifoldPoint, np.ndarray, RetractionConfig]:
    point = as_point(F, x)
    direction = as_direction(F, v, base=point.coords)
    if not isinstance(v, TangentVector):
        make_tangent(F, point, direction)
    return point, direction, cfg or RetractionConfig()


# ============================================================================
# Newton Family
# ============================================================================

def project_newton(
    F: ConstraintMap,
    y: PointLike,
    cfg: Optional[RetractionConfig] = None,
    method: str = RetractionMethod.NEWTON.value,
) -> RetractionOutcome:
    """
    Limit of the minimum-norm Newton iteration started at an arbitrary ambient y.

    Example:
        >>> project_newton(circle(), [2.0, 0.0]).final_coords
        array([1., 0.])
    """
    start = as_coords(F, y)
    return _iterate(F, start, lambda z: newton_step(F, z), cfg or RetractionConfig(), method)


def newton_retraction(
    F: ConstraintMap,
    x: PointLike,
    v: VectorLike,
    cfg: Optional[RetractionConfig] = None,
) -> RetractionOutcome:
    """
    Newton retraction R_N(x, v): Newton's minimum-norm iteration from x + v.

    Each iteration solves (J Jᵀ) y = F(z) by Cholesky at the current iterate z
    and steps δ = −Jᵀ y.

    Args:
        F: Constraint map
        x: Base point on the manifold
        v: Tangent vector at x
        cfg: Stopping rule (default RetractionConfig())

    Returns:
        RetractionOutcome with residual_history of ‖δ_k‖

    Example:
        >>> outcome = newton_retraction(circle(), [1.0, 0.0], [0.0, 0.5])
        >>> outcome.point.coords.round(6)
        array([0.894427, 0.447214])
    """
    point, v, cfg = _prepare(F, x, v, cfg)
    method = RetractionMethod.NEWTON.value
    if not np.any(v):
        return _trivial(method, point)
    return project_newton(F, point.coords + v, cfg, method=method)


def modified_newton_retraction(
    F: ConstraintMap,
    x: PointLike,
    v: VectorLike,
    cfg: Optional[RetractionConfig] = None,
) -> RetractionOutcome:
    """
    Newton retraction with J₀ = J(x + v) frozen; J₀ J₀ᵀ is factored once.

    Converges linearly with contraction factor of order ‖v‖².
    """
    point, v, cfg = _prepare(F, x, v, cfg)
    method = RetractionMethod.MODIFIED_NEWTON.value
    if not np.any(v):
        return _trivial(method, point)
    start = point.coords + v
    return _frozen_gram_iteration(F, start, F.jacobian(start), cfg, method)


def _frozen_gram_iteration(
    F: ConstraintMap, start: np.ndarray, J0: np.ndarray, cfg: RetractionConfig, method: str
) -> RetractionOutcome:
    c, n = J0.shape
    try:
        factor, factor_ops = cholesky_factor(J0 @ J0.T, scale=float(np.linalg.norm(J0)))
    except RankDeficientError as e:
        return RetractionOutcome(
            method=method, status=Status.RANK_DEFICIENT, final_coords=start.copy(),
            message=e.message,
        )
    per_step = triangular_flops(c) + matvec_flops(c, n)

    def step(z: np.ndarray) -> Tuple[np.ndarray, float]:
        y = linalg.cho_solve(factor, F.eval(z), check_finite=False)
        return -(J0.T @ y), per_step

    return _iterate(F, start, step, cfg, method, setup_ops=gram_flops(c, n) + factor_ops)


# ============================================================================
# Orthographic Family
# ============================================================================

def orthographic_retraction(
    F: ConstraintMap,
    x: PointLike,
    v: VectorLike,
    cfg: Optional[RetractionConfig] = None,
) -> RetractionOutcome:
    """
    Orthographic retraction: the point of the manifold on x + v + N_x.

    Each iteration solves (J(z) J(x)ᵀ) y = F(z) by LU and steps δ = −J(x)ᵀ y,
    so iterates never leave the affine normal space through x + v. When that
    space misses the manifold the status is NO_CONVERGENCE.

    Example:
        >>> orthographic_retraction(circle(), [1.0, 0.0], [0.0, 0.5]).point.coords.round(6)
        array([0.866025, 0.5     ])
    """
    point, v, cfg = _prepare(F, x, v, cfg)
    method = RetractionMethod.ORTHOGRAPHIC.value
    if not np.any(v):
        return _trivial(method, point)
    J_base = F.jacobian(point.coords)
    c, n = J_base.shape

    def step(z: np.ndarray) -> Tuple[np.ndarray, float]:
        y, ops = solve_cross(F.jacobian(z), J_base, F.eval(z))
        return -(J_base.T @ y), ops + matvec_flops(c, n)

    return _iterate(F, point.coords + v, step, cfg, method)


def chord_orthographic_retraction(
    F: ConstraintMap,
    x: PointLike,
    v: VectorLike,
    cfg: Optional[RetractionConfig] = None,
) -> RetractionOutcome:
    """Orthographic retraction with the solve matrix J(x) J(x)ᵀ frozen (chord method)."""
    point, v, cfg = _prepare(F, x, v, cfg)
    method = RetractionMethod.CHORD_ORTHOGRAPHIC.value
    if not np.any(v):
        return _trivial(method, point)
    return _frozen_gram_iteration(F, point.coords + v, F.jacobian(point.coords), cfg, method)


# ============================================================================
# Projective Retraction
# ============================================================================

def projective_retraction(
    F: ConstraintMap,
    x: PointLike,
    v: VectorLike,
    cfg: Optional[RetractionConfig] = None,
) -> RetractionOutcome:
    """
    Projective retraction R_P(x, v): the closest manifold point to z = x + v.

    Newton's method on the stationarity system

        y − z + J(y)ᵀ λ = 0,   F(y) = 0

    starting from the Newton retraction point (or z if that fails) with λ = 0.
    The converged point is checked for second-order optimality of the
    distance; a saddle is reported as NOT_LOCAL_MIN with the point kept.

    Example:
        >>> projective_retraction(circle(), [1.0, 0.0], [0.0, 0.5]).point.coords.round(6)
        array([0.894427, 0.447214])
    """
    point, v, cfg = _prepare(F, x, v, cfg)
    method = RetractionMethod.PROJECTIVE.value
    label = "kkt_step_norm"
    if not np.any(v):
        return _trivial(method, point, label=label)

    n, c = F.ambient_dim, F.codim
    z = point.coords + v
    warm = project_newton(F, z, cfg)
    y0 = warm.final_coords if warm.converged else z
    if not warm.converged:
        logger.debug(f"projective: warm start failed ({warm.status.value}), starting at x + v")
    eye = np.eye(n)

    def step(state: np.ndarray) -> Tuple[np.ndarray, float]:
        y, lam = state[:n], state[n:]
        J = F.jacobian(y)
        kkt = np.block([[eye + F.lagrangian_hessian(y, lam), J.T], [J, np.zeros((c, c))]])
        rhs = np.concatenate([y - z + J.T @ lam, F.eval(y)])
        factor, ops = lu_factor(kkt, scale=float(np.linalg.norm(kkt)))
        return -linalg.lu_solve(factor, rhs, check_finite=False), ops + triangular_flops(n + c)

    outcome = _iterate(
        F,
        np.concatenate([y0, np.zeros(c)]),
        step,
        cfg,
        method,
        label=label,
        setup_ops=warm.solver_ops,
        project=lambda state: state[:n],
    )
    if outcome.converged and not _is_local_min(F, outcome.final_coords, z):
        outcome.status = Status.NOT_LOCAL_MIN
        outcome.message = "stationary point is not a local minimum of the distance to x + v"
        logger.warning(f"projective: {outcome.message}")
    return outcome


def _is_local_min(F: ConstraintMap, y: np.ndarray, z: np.ndarray) -> bool:
    J = F.jacobian(y)
    # λ from the least-squares solution of Jᵀλ = z − y
    lam = np.linalg.lstsq(J.T, z - y, rcond=None)[0]
    Z = linalg.null_space(J)
    if Z.shape[1] == 0:
        return True
    reduced = Z.T @ (np.eye(F.ambient_dim) + F.lagrangian_hessian(y, lam)) @ Z
    return float(np.linalg.eigvalsh(reduced).min()) >= _LOCAL_MIN_TOL


# ============================================================================
# Oblique Control
# ============================================================================

def tilted_direction(
    F: ConstraintMap, x: PointLike, angle_degrees: float = DEFAULT_TILT_DEGREES
) -> np.ndarray:
    """
    Unit vector cos(a)·n̂ + sin(a)·t̂ tilted from the unit normal toward canonical_tangent.

    Example:
        >>> tilted_direction(circle(), [1.0, 0.0]).round(6)
        array([0.866025, 0.5     ])
    """
    if F.codim != 1:
        raise ValidationError(
            "Oblique direction needs a hypersurface (codim 1)", details={"codim": F.codim}
        )
    point = as_point(F, x)
    normal = F.jacobian(point.coords)[0]
    normal = normal / np.linalg.norm(normal)
    a = np.deg2rad(angle_degrees)
    return np.cos(a) * normal + np.sin(a) * canonical_tangent(F, point)


def oblique_control_retraction(
    F: ConstraintMap,
    x: PointLike,
    v: VectorLike,
    cfg: Optional[RetractionConfig] = None,
    w: Optional[np.ndarray] = None,
) -> RetractionOutcome:
    """
    Project x + v onto the manifold along a fixed direction w.

    1-D Newton on t ↦ F(x + v + t w). The result is a first-order retraction
    that is not second-order unless w is normal at x.

    Args:
        F: Hypersurface (codim 1)
        x: Base point
        v: Tangent vector at x
        cfg: Stopping rule
        w: Projection direction, normalized here; default tilted_direction(F, x)

    Raises:
        ValidationError: If codim != 1 or w has the wrong shape or is zero
    """
    point, v, cfg = _prepare(F, x, v, cfg)
    if F.codim != 1:
        raise ValidationError(
            "oblique_control requires a hypersurface (codim 1)", details={"codim": F.codim}
        )
    method = RetractionMethod.OBLIQUE_CONTROL.value
    w = tilted_direction(F, point) if w is None else np.asarray(w, dtype=float).reshape(-1)
    if w.shape[0] != F.ambient_dim or not np.linalg.norm(w) > 0:
        raise ValidationError("w must be a nonzero ambient vector", details={"shape": w.shape})
    w = w / np.linalg.norm(w)
    if not np.any(v):
        return _trivial(method, point)
    n = F.ambient_dim
    x_norm = max(1.0, float(np.linalg.norm(point.coords)))

    def step(z: np.ndarray) -> Tuple[np.ndarray, float]:
        slope = float(F.jacobian(z)[0] @ w)
        if abs(slope) <= 1e-14 * x_norm:
            raise SingularError("Direction w is tangent to the level set", details={"slope": slope})
        return -(F.eval(z)[0] / slope) * w, matvec_flops(1, n) + 1.0

    return _iterate(F, point.coords + v, step, cfg, method)


# ============================================================================
# Dispatch
# ============================================================================

RETRACTIONS: Dict[RetractionMethod, Callable[..., RetractionOutcome]] = {
    RetractionMethod.NEWTON: newton_retraction,
    RetractionMethod.ORTHOGRAPHIC: orthographic_retraction,
    RetractionMethod.PROJECTIVE: projective_retraction,
    RetractionMethod.MODIFIED_NEWTON: modified_newton_retraction,
    RetractionMethod.CHORD_ORTHOGRAPHIC: chord_orthographic_retraction,
    RetractionMethod.OBLIQUE_CONTROL: oblique_control_retraction,
}


def retract(
    method,
    F: ConstraintMap,
    x: PointLike,
    v: VectorLike,
    cfg: Optional[RetractionConfig] = None,
    **kwargs,
) -> RetractionOutcome:
    """
    Run a retraction by name or RetractionMethod.

    Extra keyword arguments go to the method (e.g. `w` for oblique_control).

    Example:
        >>> retract("mnr", circle(), [1.0, 0.0], [0.0, 0.5]).method
        'modified_newton'
    """
    return RETRACTIONS[RetractionMethod.parse(method)](F, x, v, cfg, **kwargs)

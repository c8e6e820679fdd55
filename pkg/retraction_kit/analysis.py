"""
Analysis
========

Experiment drivers that measure retractions:

- approximation order against the exponential map (log-log slope fits)
- convergence regions over grids of tangent vectors
- matched-pair iteration and solver cost profiles
- contraction-rate exponents of the linearly convergent variants
- randomized checks of the pseudoinverse norm bound

All random inputs are drawn up front from the seed, so results do not depend
on how evaluation is scheduled across worker threads.
"""

import logging
import math
import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Dict, List, Optional, Sequence, Tuple, TypeVar, Union

import numpy as np
from scipy import linalg

from retraction_kit.exceptions import (
    InsufficientDataError,
    RetractionKitError,
    SingularError,
    ValidationError,
)
from retraction_kit.geodesics import exp_reference, geodesic_distance
from retraction_kit.manifolds import (
    ConstraintMap,
    PointLike,
    VectorLike,
    as_direction,
    as_point,
    augmented_norm,
    canonical_tangent,
    normal_complement,
    pinv_norm,
    random_tangent,
)
from retraction_kit.models import (
    RANK_TOL,
    ComparisonRow,
    CostProfile,
    LemmaTrialReport,
    ManifoldPoint,
    MethodCost,
    OrderEstimate,
    ReferenceKind,
    RegionCell,
    RegionScan,
    RetractionConfig,
    RetractionMethod,
    RetractionOutcome,
    Status,
    TangentVector,
)
from retraction_kit.retractions import retract

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")

THREADS_ENV = "RETRACTION_KIT_THREADS"

FIT_WINDOW = (1e-12, 1e-2)
MIN_FIT_POINTS = 4
MIN_LADDER_RUNGS = 5
LEMMA_SLACK = 1e-9
RATE_WINDOW = 4

# Convergence threshold for rate measurements: long histories, stop near rounding.
RATE_CONFIG = RetractionConfig(c0=1e-13, max_iter=200)

DEFAULT_REGION_MAGNITUDES = tuple(float(m) for m in np.linspace(0.1, 3.0, 12))


# ============================================================================
# Parallel Evaluation
# ============================================================================

def resolve_threads(threads: Optional[int] = None) -> int:
    """
    Worker count: the request (default all cores) capped by RETRACTION_KIT_THREADS.

    Raises:
        ValidationError: If the request or the environment value is not a positive integer
    """
    count = threads if threads is not None else (os.cpu_count() or 1)
    if count < 1:
        raise ValidationError("threads must be positive", details={"threads": threads})
    env = os.environ.get(THREADS_ENV)
    if env:
        try:
            cap = int(env)
        except ValueError:
            raise ValidationError(
                f"{THREADS_ENV} must be an integer", details={"value": env}
            ) from None
        if cap < 1:
            raise ValidationError(f"{THREADS_ENV} must be positive", details={"value": env})
        count = min(count, cap)
    return count


def parallel_map(
    fn: Callable[[T], R], items: Sequence[T], threads: Optional[int] = None
) -> List[R]:
    """Apply fn to every item, preserving input order."""
    workers = min(resolve_threads(threads), max(1, len(items)))
    if workers == 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


# ============================================================================
# Order Estimation
# ============================================================================

def geometric_ladder(t_max: float, ratio: float = 0.5, rungs: int = 8) -> List[float]:
    """
    Stepsizes t_max, t_max·ratio, ..., strictly decreasing.

    Raises:
        ValidationError: Unless t_max > 0, 0 < ratio < 1 and rungs >= 5
    """
    if not t_max > 0:
        raise ValidationError("t_max must be positive", details={"t_max": t_max})
    if not 0.0 < ratio < 1.0:
        raise ValidationError("ladder ratio must lie in (0, 1)", details={"ratio": ratio})
    if rungs < MIN_LADDER_RUNGS:
        raise ValidationError(
            f"ladder needs at least {MIN_LADDER_RUNGS} rungs", details={"rungs": rungs}
        )
    return [t_max * ratio ** k for k in range(rungs)]


def fit_order(
    ts: Sequence[float],
    distances: Sequence[float],
    window: Tuple[float, float] = FIT_WINDOW,
) -> OrderEstimate:
    """
    Least-squares slope of log d against log t.

    Only distances inside `window` and above 100 machine epsilons enter the fit.

    Raises:
        InsufficientDataError: If fewer than four points are usable

    Example:
        >>> ts = geometric_ladder(0.2)
        >>> round(fit_order(ts, [t ** 3 / 3 for t in ts]).slope, 12)
        3.0
    """
    lo = max(window[0], 100.0 * np.finfo(float).eps)
    ladder = [(float(t), float(d)) for t, d in zip(ts, distances) if np.isfinite(d)]
    used = [(t, d) for t, d in ladder if t > 0 and lo <= d <= window[1]]
    if len(used) < MIN_FIT_POINTS:
        raise InsufficientDataError(
            details={"usable": len(used), "required": MIN_FIT_POINTS, "rungs": len(ts)},
        )
    log_t = np.log([t for t, _ in used])
    log_d = np.log([d for _, d in used])
    slope, intercept = np.polyfit(log_t, log_d, 1)
    residuals = log_d - (slope * log_t + intercept)
    total = float(np.sum((log_d - log_d.mean()) ** 2))
    r_squared = 1.0 - float(np.sum(residuals ** 2)) / total if total > 0 else 1.0
    return OrderEstimate(
        slope=float(slope),
        intercept=float(intercept),
        r_squared=r_squared,
        ladder=ladder,
        used=len(used),
    )


def _ladder(t_ladder: Optional[Sequence[float]]) -> List[float]:
    ts = list(t_ladder) if t_ladder is not None else geometric_ladder(0.2)
    if any(not b < a for a, b in zip(ts, ts[1:])) or any(not t > 0 for t in ts):
        raise ValidationError("t_ladder must be positive and strictly decreasing")
    return ts


def _nonzero(v: np.ndarray) -> np.ndarray:
    norm = float(np.linalg.norm(v))
    if norm == 0.0:
        raise ValidationError("direction must be nonzero")
    return v


def estimate_order(
    F: ConstraintMap,
    x: PointLike,
    v: VectorLike,
    method: Union[str, RetractionMethod],
    t_ladder: Optional[Sequence[float]] = None,
    reference: Union[str, ReferenceKind] = ReferenceKind.AUTO,
    cfg: Optional[RetractionConfig] = None,
    **method_kwargs,
) -> OrderEstimate:
    """
    Approximation order of a retraction: slope of log d(R(x, tv), exp(x, tv)) vs log t.

    Rungs where the retraction fails are dropped with a warning.

    Args:
        F: Constraint map
        x: Base point
        v: Tangent direction (scaled by every rung t)
        method: Retraction name
        t_ladder: Strictly decreasing stepsizes (default geometric_ladder(0.2))
        reference: analytic, numeric, or auto
        cfg: Retraction stopping rule

    Raises:
        InsufficientDataError: If fewer than four rungs are usable

    Example:
        >>> est = estimate_order(circle(), [1.0, 0.0], [0.0, 1.0], "projective")
        >>> round(est.slope, 1)
        3.0
    """
    point = as_point(F, x)
    v = _nonzero(as_direction(F, v, base=point.coords))
    method = RetractionMethod.parse(method)
    ts = _ladder(t_ladder)
    distances = []
    for t in ts:
        outcome = retract(method, F, point, t * v, cfg, **method_kwargs)
        if not outcome.converged:
            logger.warning(f"estimate_order: {method.value} {outcome.status.value} at t={t:.3e}")
            distances.append(float("nan"))
            continue
        reference_point = exp_reference(F, point, t * v, reference)
        distances.append(geodesic_distance(F, outcome.final_coords, reference_point))
    estimate = fit_order(ts, distances)
    logger.info(f"order of {method.value} on {F.label}: slope={estimate.slope:.3f}")
    return estimate


def estimate_gap_order(
    F: ConstraintMap,
    x: PointLike,
    v: VectorLike,
    method_a: Union[str, RetractionMethod] = RetractionMethod.NEWTON,
    method_b: Union[str, RetractionMethod] = RetractionMethod.PROJECTIVE,
    t_ladder: Optional[Sequence[float]] = None,
    cfg: Optional[RetractionConfig] = None,
) -> OrderEstimate:
    """
    Slope of log ‖R_a(x, tv) − R_b(x, tv)‖ against log ‖tv‖.

    Newton against projective retraction gives a gap of fourth order.
    """
    point = as_point(F, x)
    v = _nonzero(as_direction(F, v, base=point.coords))
    speed = float(np.linalg.norm(v))
    ts = _ladder(t_ladder)
    distances = []
    for t in ts:
        a = retract(method_a, F, point, t * v, cfg)
        b = retract(method_b, F, point, t * v, cfg)
        if a.converged and b.converged:
            distances.append(float(np.linalg.norm(a.final_coords - b.final_coords)))
        else:
            logger.warning(f"estimate_gap_order: failure at t={t:.3e}")
            distances.append(float("nan"))
    return fit_order([t * speed for t in ts], distances)


# ============================================================================
# Convergence Regions
# ============================================================================

def _validate_magnitudes(magnitudes: Sequence[float]) -> List[float]:
    mags = [float(m) for m in magnitudes]
    if not mags:
        raise ValidationError("magnitudes must not be empty")
    if any(m < 0 for m in mags) or any(not b > a for a, b in zip(mags, mags[1:])):
        raise ValidationError("magnitudes must be nonnegative and strictly ascending")
    return mags


def _base_points(
    F: ConstraintMap, base_points: Union[int, Sequence[PointLike]], rng: np.random.Generator
) -> List[ManifoldPoint]:
    if isinstance(base_points, int):
        if base_points < 1:
            raise ValidationError(
                "base_points must be positive", details={"base_points": base_points}
            )
        return [as_point(F, F.sample_point(rng)) for _ in range(base_points)]
    return [as_point(F, p) for p in base_points]


def _methods(methods: Sequence[Union[str, RetractionMethod]]) -> List[RetractionMethod]:
    if not methods:
        raise ValidationError("at least one method is required")
    return [RetractionMethod.parse(m) for m in methods]


def scan_region(
    F: ConstraintMap,
    methods: Sequence[Union[str, RetractionMethod]],
    base_points: Union[int, Sequence[PointLike]] = 32,
    n_directions: int = 2,
    magnitudes: Sequence[float] = DEFAULT_REGION_MAGNITUDES,
    cfg: Optional[RetractionConfig] = None,
    seed: int = 0,
    threads: Optional[int] = None,
) -> RegionScan:
    """
    Run every method on a grid of (base point, direction, magnitude) cells.

    Base points are sampled from the manifold when given as a count. Directions
    are unit tangents from projected Gaussians. Failures are recorded, never raised.

    Anomalies count, per method, failures at a magnitude below one where the
    same (base, direction) converges.

    Example:
        >>> scan = scan_region(ellipse(2, 1), ["newton", "orthographic"], base_points=4)
        >>> len(scan.cells)
        96
    """
    kinds = _methods(methods)
    names = [m.value for m in kinds]
    mags = _validate_magnitudes(magnitudes)
    if n_directions < 1:
        raise ValidationError(
            "n_directions must be positive", details={"n_directions": n_directions}
        )
    rng = np.random.default_rng(seed)
    bases = _base_points(F, base_points, rng)
    directions = [
        [random_tangent(F, base, 1.0, rng).direction for _ in range(n_directions)]
        for base in bases
    ]

    jobs = [
        (b, d, m)
        for b in range(len(bases))
        for d in range(n_directions)
        for m in mags
    ]

    def run_cell(job: Tuple[int, int, float]) -> RegionCell:
        b, d, m = job
        statuses: Dict[str, Status] = {}
        iterations: Dict[str, int] = {}
        ops: Dict[str, float] = {}
        v = TangentVector(base=bases[b], direction=m * directions[b][d])
        for kind in kinds:
            outcome = retract(kind, F, bases[b], v, cfg)
            statuses[kind.value] = outcome.status
            iterations[kind.value] = outcome.iterations
            ops[kind.value] = outcome.solver_ops
        return RegionCell(b, d, m, statuses, iterations, ops)

    logger.info(f"scan_region on {F.label}: {len(jobs)} cells x {len(kinds)} methods")
    cells = parallel_map(run_cell, jobs, threads)

    success_counts = {name: [0] * len(mags) for name in names}
    for cell in cells:
        bucket = mags.index(cell.magnitude)
        for name in names:
            if cell.succeeded(name):
                success_counts[name][bucket] += 1

    anomalies = {name: 0 for name in names}
    per_ray = len(mags)
    for start in range(0, len(cells), per_ray):
        ray = cells[start:start + per_ray]
        for name in names:
            converged = [cell.succeeded(name) for cell in ray]
            if True in converged:
                last = len(converged) - 1 - converged[::-1].index(True)
                anomalies[name] += converged[:last].count(False)

    scan = RegionScan(
        manifold=F.label,
        methods=names,
        magnitudes=mags,
        cells=cells,
        success_counts=success_counts,
        anomalies=anomalies,
    )
    newton, ortho = RetractionMethod.NEWTON.value, RetractionMethod.ORTHOGRAPHIC.value
    if newton in names and ortho in names:
        violations = scan.nesting_violations(ortho, newton)
        if violations:
            logger.warning(
                f"scan_region: {len(violations)} cells where {ortho} converges "
                f"but {newton} does not"
            )
    return scan


# ============================================================================
# Cost Profiles
# ============================================================================

def sample_tangent_pairs(
    F: ConstraintMap,
    count: int,
    max_magnitude: float,
    seed: int = 0,
) -> List[Tuple[ManifoldPoint, TangentVector]]:
    """
    Random (x, v) pairs with x from the manifold sampler and ‖v‖ uniform in [0, max_magnitude].
    """
    if count < 1:
        raise ValidationError("count must be positive", details={"count": count})
    if not max_magnitude > 0:
        raise ValidationError(
            "max_magnitude must be positive", details={"max_magnitude": max_magnitude}
        )
    rng = np.random.default_rng(seed)
    pairs = []
    for _ in range(count):
        x = as_point(F, F.sample_point(rng))
        unit = random_tangent(F, x, 1.0, rng)
        magnitude = rng.uniform(0.0, max_magnitude)
        pairs.append((x, TangentVector(base=x, direction=magnitude * unit.direction)))
    return pairs


def _aggregate(method: str, outcomes: List[RetractionOutcome], matched: List[int]) -> MethodCost:
    failures = sum(1 for o in outcomes if not o.converged)
    iterations = [outcomes[i].iterations for i in matched]
    ops = [outcomes[i].solver_ops for i in matched]
    total_iterations = sum(iterations)
    return MethodCost(
        method=method,
        samples=len(outcomes),
        failures=failures,
        mean_iterations=float(np.mean(iterations)) if iterations else 0.0,
        max_iterations=max(iterations) if iterations else 0,
        mean_solver_ops=float(np.mean(ops)) if ops else 0.0,
        mean_ops_per_iteration=sum(ops) / total_iterations if total_iterations else 0.0,
    )


def profile_cost(
    F: ConstraintMap,
    samples: Sequence[Tuple[PointLike, VectorLike]],
    cfg: Optional[RetractionConfig] = None,
    methods: Sequence[Union[str, RetractionMethod]] = (
        RetractionMethod.NEWTON,
        RetractionMethod.ORTHOGRAPHIC,
    ),
    threads: Optional[int] = None,
) -> CostProfile:
    """
    Matched-pair comparison of iterations and solver operations.

    Means are taken over samples where every method converged; failure rates
    over all samples. The first method is checked against the second:
    iterations(first) <= iterations(second) + 1 per matched pair.
    """
    kinds = _methods(methods)
    if len(kinds) != 2:
        raise ValidationError("profile_cost compares exactly two methods")
    if not samples:
        raise ValidationError("sample set must not be empty")

    def run_pair(sample: Tuple[PointLike, VectorLike]) -> List[RetractionOutcome]:
        x, v = sample
        return [retract(kind, F, x, v, cfg) for kind in kinds]

    results = parallel_map(run_pair, list(samples), threads)
    matched = [i for i, pair in enumerate(results) if all(o.converged for o in pair)]
    excess = [results[i][0].iterations - results[i][1].iterations for i in matched]
    violations = sum(1 for e in excess if e > 1)
    if violations:
        logger.warning(
            f"profile_cost: {kinds[0].value} needed more than one extra iteration "
            f"in {violations} matched pairs"
        )
    return CostProfile(
        methods=[
            _aggregate(kind.value, [pair[j] for pair in results], matched)
            for j, kind in enumerate(kinds)
        ],
        matched_pairs=len(matched),
        iteration_violations=violations,
        max_iteration_excess=max([0] + excess),
    )


# ============================================================================
# Convergence Rates
# ============================================================================

def convergence_ratios(
    history: Sequence[float], power: float = 1.0, floor: float = 1e-12
) -> List[float]:
    """
    Ratios h[k+1] / h[k]^power for consecutive entries with h[k+1] >= floor.

    power=2 gives the quadratic convergence constants of a Newton history.
    """
    return [
        b / a ** power
        for a, b in zip(history, history[1:])
        if a > 0 and b >= floor
    ]


def tail_contraction_factor(
    history: Sequence[float], window: int = RATE_WINDOW, floor: float = 0.0
) -> float:
    """
    Geometric mean of the last `window` ratios h[k+1]/h[k] within the prefix above floor.

    Example:
        >>> tail_contraction_factor([0.1 * 2.0 ** -k for k in range(10)])
        0.5

    Raises:
        InsufficientDataError: If fewer than `window` ratios are usable
    """
    usable: List[float] = []
    for h in history:
        if not h > floor:
            break
        usable.append(float(h))
    ratios = [b / a for a, b in zip(usable, usable[1:])]
    if len(ratios) < window:
        raise InsufficientDataError(
            "Residual history too short for a contraction factor",
            details={"ratios": len(ratios), "required": window},
        )
    return float(np.exp(np.mean(np.log(ratios[-window:]))))


def estimate_rate_exponent(
    F: ConstraintMap,
    x: PointLike,
    method: Union[str, RetractionMethod],
    v_magnitudes: Sequence[float],
    direction: Optional[VectorLike] = None,
    cfg: Optional[RetractionConfig] = None,
) -> float:
    """
    Exponent q in μ ≈ λ‖v‖^q for a linearly convergent retraction.

    For each magnitude the contraction factor μ̂ comes from the tail of the
    step-norm history; the result is the slope of log μ̂ against log ‖v‖.

    Args:
        F: Constraint map
        x: Base point
        method: modified_newton or chord_orthographic
        v_magnitudes: At least four positive magnitudes
        direction: Tangent direction (default canonical_tangent), normalized here
        cfg: Stopping rule (default RATE_CONFIG)

    Raises:
        ValidationError: On other methods or fewer than four magnitudes
        InsufficientDataError: If a history is too short or a run fails
    """
    kind = RetractionMethod.parse(method)
    if kind not in (RetractionMethod.MODIFIED_NEWTON, RetractionMethod.CHORD_ORTHOGRAPHIC):
        raise ValidationError(
            "rate exponents apply to modified_newton and chord_orthographic",
            details={"method": kind.value},
        )
    mags = [float(m) for m in v_magnitudes]
    if len(mags) < 4 or any(not m > 0 for m in mags):
        raise ValidationError(
            "need at least four positive magnitudes", details={"given": len(mags)}
        )
    point = as_point(F, x)
    if direction is None:
        unit = canonical_tangent(F, point)
    else:
        unit = _nonzero(as_direction(F, direction, base=point.coords))
        unit = unit / np.linalg.norm(unit)
    cfg = cfg or RATE_CONFIG
    floor = cfg.c0 * max(1.0, float(np.linalg.norm(point.coords)))

    factors = []
    for m in mags:
        outcome = retract(kind, F, point, m * unit, cfg)
        if not outcome.converged:
            raise InsufficientDataError(
                f"{kind.value} did not converge at ‖v‖={m}",
                details={"status": outcome.status.value},
            )
        factors.append(tail_contraction_factor(outcome.residual_history, floor=floor))
        logger.debug(f"{kind.value} ‖v‖={m}: mu={factors[-1]:.3e}")
    slope, _ = np.polyfit(np.log(mags), np.log(factors), 1)
    logger.info(f"rate exponent of {kind.value} on {F.label}: {slope:.3f}")
    return float(slope)


# ============================================================================
# Norm Bound Trials
# ============================================================================

def _full_rank_matrix(rng: np.random.Generator, c: int, n: int) -> np.ndarray:
    while True:
        J = rng.standard_normal((c, n))
        s = linalg.svdvals(J)
        if s.min() > RANK_TOL * s.max():
            return J


def _random_rows(rng: np.random.Generator, J: np.ndarray) -> np.ndarray:
    """Random orthonormal rows V with [J; V] nonsingular."""
    c, n = J.shape
    while True:
        Q, _ = np.linalg.qr(rng.standard_normal((n, n - c)))
        V = Q.T
        s = linalg.svdvals(np.vstack([J, V]))
        if s.min() > 1e-8 * s.max():
            return V


def lemma_ajnf_trial(
    n: Optional[int] = None,
    c: Optional[int] = None,
    n_trials: int = 1000,
    seed: int = 0,
    complement: bool = True,
) -> LemmaTrialReport:
    """
    Randomized check of ‖J†‖ ≤ ‖[J; V]⁻¹‖ for full-row-rank J.

    Args:
        n: Ambient dimension; drawn from 2..8 per trial when omitted
        c: Codimension; drawn from 1..n-1 per trial when omitted
        n_trials: Number of random matrices
        seed: Random seed
        complement: V spans the orthogonal complement of J's rows (JVᵀ = 0);
            otherwise V is any orthonormal-row matrix completing J to a basis

    Returns:
        LemmaTrialReport with the violation count and the largest
        ‖J†‖ − ‖[J; V]⁻¹‖ observed (nonpositive when the bound holds)
    """
    if n_trials < 1:
        raise ValidationError("n_trials must be positive", details={"n_trials": n_trials})
    if n is not None and c is not None and not 1 <= c < n:
        raise ValidationError("need 1 <= c < n", details={"n": n, "c": c})
    if n is not None and n < 2:
        raise ValidationError("need n >= 2", details={"n": n})
    rng = np.random.default_rng(seed)
    violations = 0
    max_gap = -math.inf
    for _ in range(n_trials):
        nn = n if n is not None else int(rng.integers(2, 9))
        cc = c if c is not None else int(rng.integers(1, nn))
        if not 1 <= cc < nn:
            raise ValidationError("need 1 <= c < n", details={"n": nn, "c": cc})
        J = _full_rank_matrix(rng, cc, nn)
        V = normal_complement(J) if complement else _random_rows(rng, J)
        try:
            gap = pinv_norm(J) - augmented_norm(J, V)
        except SingularError:
            continue
        max_gap = max(max_gap, gap)
        if gap > LEMMA_SLACK:
            violations += 1
    if violations:
        logger.warning(f"lemma_ajnf_trial: {violations} violations in {n_trials} trials")
    return LemmaTrialReport(
        trials=n_trials,
        violations=violations,
        max_gap=float(max_gap),
        n=n,
        c=c,
        complement=complement,
    )


# ============================================================================
# Method Comparison
# ============================================================================

def compare_methods(
    F: ConstraintMap,
    methods: Sequence[Union[str, RetractionMethod]],
    x: Optional[PointLike] = None,
    v: Optional[VectorLike] = None,
    t_ladder: Optional[Sequence[float]] = None,
    base_points: Union[int, Sequence[PointLike]] = 8,
    n_directions: int = 2,
    magnitudes: Sequence[float] = DEFAULT_REGION_MAGNITUDES,
    cfg: Optional[RetractionConfig] = None,
    seed: int = 0,
    threads: Optional[int] = None,
) -> List[ComparisonRow]:
    """
    Measured order, stability and cost per method.

    The order comes from estimate_order at x (default the manifold anchor) along
    v (default canonical_tangent); it is NaN when the fit has too little data.
    Success rate and the largest converged magnitude come from a region scan;
    mean iterations and solver operations are over its converged cells.
    """
    kinds = _methods(methods)
    point = as_point(F, x) if x is not None else F.anchor_point()
    direction = canonical_tangent(F, point) if v is None else as_direction(F, v, base=point.coords)
    scan = scan_region(
        F, kinds, base_points, n_directions, magnitudes, cfg=cfg, seed=seed, threads=threads
    )
    rows = []
    for kind in kinds:
        try:
            slope = estimate_order(F, point, direction, kind, t_ladder, cfg=cfg).slope
        except RetractionKitError as e:
            logger.warning(f"compare_methods: no order estimate for {kind.value}: {e}")
            slope = float("nan")
        converged = [cell for cell in scan.cells if cell.succeeded(kind.value)]
        iterations = [c.iterations[kind.value] for c in converged]
        ops = [c.solver_ops[kind.value] for c in converged]
        rows.append(
            ComparisonRow(
                method=kind.value,
                order_slope=slope,
                success_rate=len(converged) / len(scan.cells),
                max_converged_magnitude=max((c.magnitude for c in converged), default=0.0),
                mean_iterations=float(np.mean(iterations)) if converged else 0.0,
                mean_solver_ops=float(np.mean(ops)) if converged else 0.0,
            )
        )
    return rows

"""
Constraint Manifolds
====================

Constraint maps F: ℝⁿ → ℝᶜ whose zero set is the manifold, the built-in test
manifolds, tangent/normal space operations and the minimum-norm Newton step.

Linear solves go through two paths with flop accounting:

- symmetric positive definite (Cholesky) for Gram matrices J Jᵀ
- general (LU) for cross products J J₀ᵀ
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Dict, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import linalg

from retraction_kit.exceptions import (
    OffManifoldError,
    RankDeficientError,
    SingularError,
    ValidationError,
)
from retraction_kit.models import (
    FD_STEP,
    RANK_TOL,
    TOL_MANIFOLD,
    TOL_TANGENT,
    ManifoldPoint,
    TangentVector,
)

logger = logging.getLogger(__name__)

ArrayLike = Union[np.ndarray, Sequence[float]]
PointLike = Union[ManifoldPoint, np.ndarray, list, tuple]
VectorLike = Union[TangentVector, np.ndarray, list, tuple]

# Upper bound on how many Gaussian draws random_tangent makes before giving up.
_MAX_TANGENT_DRAWS = 100


# ============================================================================
# Constraint Map
# ============================================================================

@dataclass(frozen=True)
class ConstraintMap:
    """
    A smooth map F: ℝⁿ → ℝᶜ with Jacobian, defining the manifold F⁻¹(0).

    Evaluation is pure, so one instance may be shared between threads.

    Args:
        ambient_dim: n
        codim: c, with 1 ≤ c < n
        eval_fn: x ↦ F(x), shape (c,)
        jacobian_fn: x ↦ J(x), shape (c, n)
        second_derivative_fn: (x, v) ↦ (vᵀ ∇²F_i(x) v)_i, shape (c,); central
            differences of the Jacobian are used when omitted
        name: builtin name or "custom"
        params: builtin parameters, used for labels
        sampler: rng ↦ random point on the manifold
        anchor: a generic point on the manifold used as a default base point

    Example:
        >>> F = ConstraintMap(
        ...     ambient_dim=2,
        ...     codim=1,
        ...     eval_fn=lambda x: np.array([x @ x - 1.0]),
        ...     jacobian_fn=lambda x: 2.0 * x[np.newaxis, :],
        ... )
        >>> newton_step(F, np.array([2.0, 0.0]))[0]
        array([-0.75,  0.  ])
    """
    ambient_dim: int
    codim: int
    eval_fn: Callable[[np.ndarray], np.ndarray]
    jacobian_fn: Callable[[np.ndarray], np.ndarray]
    second_derivative_fn: Optional[Callable[[np.ndarray, np.ndarray], np.ndarray]] = None
    name: str = "custom"
    params: Tuple[float, ...] = ()
    sampler: Optional[Callable[[np.random.Generator], np.ndarray]] = field(
        default=None, compare=False
    )
    anchor: Optional[Tuple[float, ...]] = None

    def __post_init__(self) -> None:
        if self.codim < 1 or self.ambient_dim <= self.codim:
            raise ValidationError(
                "Constraint map needs 1 <= codim < ambient_dim",
                details={"ambient_dim": self.ambient_dim, "codim": self.codim},
            )

    @property
    def manifold_dim(self) -> int:
        """d = n − c."""
        return self.ambient_dim - self.codim

    @property
    def label(self) -> str:
        """Spec string that parse_manifold maps back to this manifold."""
        if not self.params:
            return self.name
        return f"{self.name}:" + ",".join(_format_param(p) for p in self.params)

    @property
    def has_closed_form_geodesics(self) -> bool:
        return self.name in (BuiltinManifold.CIRCLE.value, BuiltinManifold.SPHERE.value)

    def eval(self, x: np.ndarray) -> np.ndarray:
        return np.atleast_1d(np.asarray(self.eval_fn(x), dtype=float))

    def jacobian(self, x: np.ndarray) -> np.ndarray:
        return np.asarray(self.jacobian_fn(x), dtype=float).reshape(self.codim, self.ambient_dim)

    def second_derivative(self, x: np.ndarray, v: np.ndarray) -> np.ndarray:
        """(vᵀ ∇²F_i(x) v)_i for every component i."""
        if self.second_derivative_fn is not None:
            return np.atleast_1d(np.asarray(self.second_derivative_fn(x, v), dtype=float))
        norm_v = float(np.linalg.norm(v))
        if norm_v == 0.0:
            return np.zeros(self.codim)
        u = v / norm_v
        h = FD_STEP * max(1.0, float(np.linalg.norm(x)))
        dJ = (self.jacobian(x + h * u) - self.jacobian(x - h * u)) / (2.0 * h)
        return (dJ @ v) * norm_v

    def lagrangian_hessian(self, x: np.ndarray, lam: np.ndarray) -> np.ndarray:
        """Σᵢ λᵢ ∇²Fᵢ(x), assembled from the bilinear form by polarization."""
        n = self.ambient_dim
        eye = np.eye(n)
        diag = np.array([lam @ self.second_derivative(x, eye[j]) for j in range(n)])
        H = np.diag(diag)
        for j in range(n):
            for k in range(j + 1, n):
                q = lam @ self.second_derivative(x, eye[j] + eye[k])
                H[j, k] = H[k, j] = 0.5 * (q - diag[j] - diag[k])
        return H

    def sample_point(self, rng: np.random.Generator) -> np.ndarray:
        if self.sampler is None:
            raise ValidationError(f"Manifold '{self.label}' has no sampler")
        return np.asarray(self.sampler(rng), dtype=float)

    def anchor_point(self) -> ManifoldPoint:
        if self.anchor is None:
            raise ValidationError(f"Manifold '{self.label}' has no anchor point")
        return make_point(self, np.array(self.anchor, dtype=float))


def _format_param(value: float) -> str:
    return str(int(value)) if float(value).is_integer() else repr(float(value))


# ============================================================================
# Points and Vectors
# ============================================================================

def make_point(F: ConstraintMap, coords: ArrayLike) -> ManifoldPoint:
    """Validate coordinates and wrap them as a ManifoldPoint."""
    x = _as_vector(F, coords, "coords")
    residual = float(np.linalg.norm(F.eval(x)))
    if residual > TOL_MANIFOLD:
        raise OffManifoldError(
            details={"manifold": F.label, "residual": f"{residual:.3e}"},
        )
    return ManifoldPoint(coords=x, residual=residual)


def make_tangent(F: ConstraintMap, base: PointLike, direction: ArrayLike) -> TangentVector:
    """Validate ‖J(base) v‖ ≤ TOL_TANGENT·max(1, ‖v‖) and wrap as a TangentVector."""
    point = as_point(F, base)
    v = _as_vector(F, direction, "direction")
    defect = float(np.linalg.norm(F.jacobian(point.coords) @ v))
    if defect > TOL_TANGENT * max(1.0, float(np.linalg.norm(v))):
        raise ValidationError(
            "Vector is not tangent at the base point",
            details={"manifold": F.label, "normal_component": f"{defect:.3e}"},
        )
    return TangentVector(base=point, direction=v)


def as_point(F: ConstraintMap, x: PointLike) -> ManifoldPoint:
    if isinstance(x, ManifoldPoint):
        return x
    return make_point(F, x)


def as_coords(F: ConstraintMap, x: PointLike) -> np.ndarray:
    if isinstance(x, ManifoldPoint):
        return x.coords
    return _as_vector(F, x, "x")


def as_direction(F: ConstraintMap, v: VectorLike, base: Optional[np.ndarray] = None) -> np.ndarray:
    """Ambient coordinates of a tangent vector, checking its base when known."""
    if isinstance(v, TangentVector):
        if base is not None and not np.allclose(v.base.coords, base, rtol=0.0, atol=1e-12):
            raise ValidationError("Tangent vector is based at a different point")
        return v.direction
    return _as_vector(F, v, "v")


def _as_vector(F: ConstraintMap, value: ArrayLike, name: str) -> np.ndarray:
    x = np.asarray(value, dtype=float).reshape(-1)
    if x.shape[0] != F.ambient_dim:
        raise ValidationError(
            f"{name} has dimension {x.shape[0]}, expected {F.ambient_dim}",
            details={"manifold": F.label},
        )
    return x


# ============================================================================
# Linear Solvers
# ============================================================================

def cholesky_flops(c: int) -> float:
    return c ** 3 / 3.0


def lu_flops(c: int) -> float:
    return 2.0 * c ** 3 / 3.0


def triangular_flops(c: int) -> float:
    """Forward plus backward substitution."""
    return 2.0 * c * c


def gram_flops(c: int, n: int) -> float:
    """J Jᵀ using symmetry."""
    return float(c * (c + 1) * n)


def cross_flops(c: int, n: int) -> float:
    """J J₀ᵀ for distinct J, J₀."""
    return 2.0 * c * c * n


def matvec_flops(c: int, n: int) -> float:
    return 2.0 * c * n


def cholesky_factor(A: np.ndarray, scale: float) -> Tuple[Tuple[np.ndarray, bool], float]:
    """
    Factor a symmetric positive definite matrix.

    Args:
        A: c×c Gram matrix J Jᵀ
        scale: ‖J‖ used as the rank reference

    Returns:
        (factor, flops) with factor usable by scipy.linalg.cho_solve

    Raises:
        RankDeficientError: If a pivot of the factor falls below RANK_TOL·scale
    """
    try:
        factor = linalg.cho_factor(A, lower=True, check_finite=True)
    except (linalg.LinAlgError, ValueError) as e:
        raise RankDeficientError(details={"reason": str(e)}) from None
    pivots = np.abs(np.diag(factor[0]))
    if pivots.min() <= RANK_TOL * scale:
        raise RankDeficientError(
            details={"min_pivot": f"{pivots.min():.3e}", "scale": f"{scale:.3e}"},
        )
    return factor, cholesky_flops(A.shape[0])


def lu_factor(A: np.ndarray, scale: float) -> Tuple[Tuple[np.ndarray, np.ndarray], float]:
    """
    Factor a general square matrix with partial pivoting.

    Raises:
        SingularError: If a pivot falls below RANK_TOL·scale
    """
    if not np.all(np.isfinite(A)):
        raise SingularError(details={"reason": "non-finite entries"})
    lu, piv = linalg.lu_factor(A, check_finite=False)
    pivots = np.abs(np.diag(lu))
    if pivots.min() <= RANK_TOL * scale:
        raise SingularError(
            details={"min_pivot": f"{pivots.min():.3e}", "scale": f"{scale:.3e}"},
        )
    return (lu, piv), lu_flops(A.shape[0])


def solve_spd(J: np.ndarray, rhs: np.ndarray) -> Tuple[np.ndarray, float]:
    """Solve (J Jᵀ) y = rhs on the symmetric path; returns (y, flops)."""
    c, n = J.shape
    factor, flops = cholesky_factor(J @ J.T, scale=float(np.linalg.norm(J)))
    y = linalg.cho_solve(factor, rhs, check_finite=False)
    return y, flops + gram_flops(c, n) + triangular_flops(c)


def solve_cross(J: np.ndarray, J_base: np.ndarray, rhs: np.ndarray) -> Tuple[np.ndarray, float]:
    """Solve (J J₀ᵀ) y = rhs on the general path; returns (y, flops)."""
    c, n = J.shape
    scale = float(np.linalg.norm(J) * np.linalg.norm(J_base))
    factor, flops = lu_factor(J @ J_base.T, scale=scale)
    y = linalg.lu_solve(factor, rhs, check_finite=False)
    return y, flops + cross_flops(c, n) + triangular_flops(c)


# ============================================================================
# Newton Step and Tangent Space
# ============================================================================

def newton_step(F: ConstraintMap, x: ArrayLike) -> Tuple[np.ndarray, float]:
    """
    Minimum-norm Newton step δ = −J†(x) F(x) = −Jᵀ (J Jᵀ)⁻¹ F(x).

    Args:
        F: Constraint map
        x: Ambient point (need not lie on the manifold)

    Returns:
        (delta, flops) where flops counts the symmetric solve path

    Raises:
        RankDeficientError: If J(x) J(x)ᵀ has a pivot below the rank tolerance

    Example:
        >>> delta, ops = newton_step(circle(), [2.0, 0.0])
        >>> delta
        array([-0.75,  0.  ])
    """
    x = _as_vector(F, x, "x")
    J = F.jacobian(x)
    y, flops = solve_spd(J, F.eval(x))
    c, n = J.shape
    return -(J.T @ y), flops + matvec_flops(c, n)


def tangent_project(F: ConstraintMap, x: PointLike, w: ArrayLike) -> TangentVector:
    """
    Orthogonal projection (I − J†J) w onto the tangent space at x.

    Raises:
        RankDeficientError: If J(x) is rank deficient
    """
    point = as_point(F, x)
    w = _as_vector(F, w, "w")
    return TangentVector(base=point, direction=_project_out_normal(F, point.coords, w))


def _project_out_normal(F: ConstraintMap, x: np.ndarray, w: np.ndarray) -> np.ndarray:
    J = F.jacobian(x)
    y, _ = solve_spd(J, J @ w)
    return w - J.T @ y


def random_tangent(
    F: ConstraintMap,
    x: PointLike,
    magnitude: float,
    seed: Union[int, np.random.Generator, None] = None,
) -> TangentVector:
    """
    Random tangent vector of a given length, uniform in direction.

    A Gaussian ambient vector is projected onto the tangent space and rescaled.
    Passing a Generator draws from it; an int seed gives a reproducible vector.

    Raises:
        ValidationError: If magnitude is not positive
    """
    if not magnitude > 0:
        raise ValidationError("magnitude must be positive", details={"magnitude": magnitude})
    point = as_point(F, x)
    rng = np.random.default_rng(seed)
    for _ in range(_MAX_TANGENT_DRAWS):
        t = _project_out_normal(F, point.coords, rng.standard_normal(F.ambient_dim))
        norm = float(np.linalg.norm(t))
        if norm > 1e-8:
            return TangentVector(base=point, direction=t * (magnitude / norm))
    raise RankDeficientError("Could not draw a nonzero tangent vector")


def canonical_tangent(F: ConstraintMap, x: PointLike) -> np.ndarray:
    """Unit tangent vector from the null space of J(x), sign fixed for reproducibility."""
    point = as_point(F, x)
    basis = linalg.null_space(F.jacobian(point.coords))
    if basis.shape[1] == 0:
        raise RankDeficientError("Tangent space is empty")
    t = basis[:, 0]
    return t if t[np.argmax(np.abs(t))] > 0 else -t


# ============================================================================
# Norm Bounds
# ============================================================================

def pinv_norm(J: np.ndarray) -> float:
    """‖J†‖ = 1/σ_min(J) for full-row-rank J."""
    s = linalg.svdvals(J)
    if s.size == 0 or s.min() <= RANK_TOL * s.max():
        raise RankDeficientError(details={"sigma_min": f"{s.min() if s.size else 0.0:.3e}"})
    return float(1.0 / s.min())


def augmented_norm(J: np.ndarray, V: np.ndarray) -> float:
    """‖[J; V]⁻¹‖ for a square, nonsingular stack."""
    stack = np.vstack([J, V])
    if stack.shape[0] != stack.shape[1]:
        raise ValidationError(
            "Stacked matrix [J; V] must be square",
            details={"shape": f"{stack.shape[0]}x{stack.shape[1]}"},
        )
    s = linalg.svdvals(stack)
    if s.min() <= RANK_TOL * s.max():
        raise SingularError(details={"sigma_min": f"{s.min():.3e}"})
    return float(1.0 / s.min())


def normal_complement(J: np.ndarray) -> np.ndarray:
    """Orthonormal rows V spanning the complement of J's row space (QR of Jᵀ)."""
    c = J.shape[0]
    Q, _ = linalg.qr(J.T, mode="full")
    return Q[:, c:].T


def pseudoinverse_norm(F: ConstraintMap, x: PointLike) -> float:
    """
    Spectral norm of J(x)†.

    Example:
        >>> pseudoinverse_norm(circle(), [1.0, 0.0])
        0.5
    """
    return pinv_norm(F.jacobian(as_coords(F, x)))


def augmented_inverse_norm(F: ConstraintMap, x: PointLike, V: np.ndarray) -> float:
    """
    Spectral norm of the inverse of [J(x); V].

    Args:
        F: Constraint map
        x: Point on the manifold
        V: d×n matrix with orthonormal rows

    Raises:
        ValidationError: If the stack is not square
        SingularError: If the stack is numerically singular
    """
    V = np.atleast_2d(np.asarray(V, dtype=float))
    return augmented_norm(F.jacobian(as_coords(F, x)), V)


def check_jacobian(F: ConstraintMap, x: ArrayLike) -> float:
    """Relative deviation of J(x) from central differences of F."""
    x = _as_vector(F, x, "x")
    h = 1e-6 * max(1.0, float(np.linalg.norm(x)))
    eye = np.eye(F.ambient_dim)
    fd = np.column_stack(
        [(F.eval(x + h * e) - F.eval(x - h * e)) / (2.0 * h) for e in eye]
    )
    J = F.jacobian(x)
    return float(np.linalg.norm(J - fd) / max(np.linalg.norm(J), 1e-300))


# ============================================================================
# Built-in Manifolds
# ============================================================================

class BuiltinManifold(str, Enum):
    """Names accepted by parse_manifold."""
    CIRCLE = "circle"
    SPHERE = "sphere"
    ELLIPSE = "ellipse"
    ELLIPSOID = "ellipsoid"
    TORUS = "torus"
    ORTHO_COLUMNS = "ortho_columns"


def _quadric(name: str, axes: Tuple[float, ...], params: Tuple[float, ...],
             anchor: Tuple[float, ...]) -> ConstraintMap:
    """F(x) = Σ xᵢ²/aᵢ² − 1."""
    w = 1.0 / np.asarray(axes, dtype=float) ** 2
    radii = np.asarray(axes, dtype=float)

    def sample(rng: np.random.Generator) -> np.ndarray:
        u = rng.standard_normal(len(axes))
        return radii * u / np.linalg.norm(u)

    return ConstraintMap(
        ambient_dim=len(axes),
        codim=1,
        eval_fn=lambda x: np.array([w @ (x * x) - 1.0]),
        jacobian_fn=lambda x: (2.0 * w * x)[np.newaxis, :],
        second_derivative_fn=lambda x, v: np.array([2.0 * (w @ (v * v))]),
        name=name,
        params=params,
        sampler=sample,
        anchor=anchor,
    )


def circle() -> ConstraintMap:
    """Unit circle ‖x‖² − 1 = 0 in ℝ²."""
    return _quadric(BuiltinManifold.CIRCLE.value, (1.0, 1.0), (), (1.0, 0.0))


def sphere(n: int = 3) -> ConstraintMap:
    """Unit sphere ‖x‖² − 1 = 0 in ℝⁿ."""
    if n < 2:
        raise ValidationError("sphere needs n >= 2", details={"n": n})
    anchor = (1.0,) + (0.0,) * (n - 1)
    return _quadric(BuiltinManifold.SPHERE.value, (1.0,) * n, (float(n),), anchor)


def ellipse(a: float = 2.0, b: float = 1.0) -> ConstraintMap:
    """x₁²/a² + x₂²/b² − 1 = 0."""
    _require_positive(a=a, b=b)
    s = np.sqrt(0.5)
    return _quadric(BuiltinManifold.ELLIPSE.value, (a, b), (a, b), (a * s, b * s))


def ellipsoid(a: float = 3.0, b: float = 2.0, c: float = 1.0) -> ConstraintMap:
    """x₁²/a² + x₂²/b² + x₃²/c² − 1 = 0."""
    _require_positive(a=a, b=b, c=c)
    s = 1.0 / np.sqrt(3.0)
    return _quadric(BuiltinManifold.ELLIPSOID.value, (a, b, c), (a, b, c), (a * s, b * s, c * s))


def torus(R: float = 2.0, r: float = 0.5) -> ConstraintMap:
    """
    Torus as the zero set of the quartic (‖x‖² + R² − r²)² − 4R²(x₁² + x₂²).

    Requires R > r > 0 so that 0 is a regular value.
    """
    _require_positive(R=R, r=r)
    if not R > r:
        raise ValidationError("torus needs R > r", details={"R": R, "r": r})
    k = R * R - r * r
    P = np.array([1.0, 1.0, 0.0])

    def F(x: np.ndarray) -> np.ndarray:
        q = x @ x + k
        return np.array([q * q - 4.0 * R * R * (x[0] ** 2 + x[1] ** 2)])

    def J(x: np.ndarray) -> np.ndarray:
        q = x @ x + k
        return (4.0 * q * x - 8.0 * R * R * P * x)[np.newaxis, :]

    def d2(x: np.ndarray, v: np.ndarray) -> np.ndarray:
        q = x @ x + k
        return np.array([4.0 * q * (v @ v) + 8.0 * (x @ v) ** 2 - 8.0 * R * R * (P @ (v * v))])

    def embed(u: float, phi: float) -> np.ndarray:
        rho = R + r * np.cos(phi)
        return np.array([rho * np.cos(u), rho * np.sin(u), r * np.sin(phi)])

    return ConstraintMap(
        ambient_dim=3,
        codim=1,
        eval_fn=F,
        jacobian_fn=J,
        second_derivative_fn=d2,
        name=BuiltinManifold.TORUS.value,
        params=(R, r),
        sampler=lambda rng: embed(*rng.uniform(0.0, 2.0 * np.pi, size=2)),
        anchor=tuple(embed(0.3, 0.7)),
    )


def ortho_columns(n: int = 5, p: int = 2) -> ConstraintMap:
    """
    n×p matrices with orthonormal columns, flattened row-major.

    Only the upper triangle of XᵀX − I is kept, so c = p(p+1)/2 and the
    Jacobian has full row rank on the manifold.
    """
    if p < 1 or n <= p:
        raise ValidationError("ortho_columns needs 1 <= p < n", details={"n": n, "p": p})
    rows, cols = np.triu_indices(p)
    c = rows.size

    def F(x: np.ndarray) -> np.ndarray:
        X = x.reshape(n, p)
        return (X.T @ X - np.eye(p))[rows, cols]

    def J(x: np.ndarray) -> np.ndarray:
        X = x.reshape(n, p)
        out = np.zeros((c, n, p))
        for k, (i, j) in enumerate(zip(rows, cols)):
            out[k, :, i] += X[:, j]
            out[k, :, j] += X[:, i]
        return out.reshape(c, n * p)

    def d2(x: np.ndarray, v: np.ndarray) -> np.ndarray:
        V = v.reshape(n, p)
        return 2.0 * (V.T @ V)[rows, cols]

    def sample(rng: np.random.Generator) -> np.ndarray:
        Q, _ = np.linalg.qr(rng.standard_normal((n, p)))
        return Q.reshape(-1)

    return ConstraintMap(
        ambient_dim=n * p,
        codim=c,
        eval_fn=F,
        jacobian_fn=J,
        second_derivative_fn=d2,
        name=BuiltinManifold.ORTHO_COLUMNS.value,
        params=(float(n), float(p)),
        sampler=sample,
        anchor=tuple(np.eye(n, p).reshape(-1)),
    )


def _require_positive(**values: float) -> None:
    for key, value in values.items():
        if not value > 0:
            raise ValidationError(f"{key} must be positive", details={key: value})


_BUILDERS: Dict[BuiltinManifold, Callable[..., ConstraintMap]] = {
    BuiltinManifold.CIRCLE: circle,
    BuiltinManifold.SPHERE: sphere,
    BuiltinManifold.ELLIPSE: ellipse,
    BuiltinManifold.ELLIPSOID: ellipsoid,
    BuiltinManifold.TORUS: torus,
    BuiltinManifold.ORTHO_COLUMNS: ortho_columns,
}

_INTEGER_PARAMS = {BuiltinManifold.SPHERE, BuiltinManifold.ORTHO_COLUMNS}

_ARITY = {
    BuiltinManifold.CIRCLE: (0,),
    BuiltinManifold.SPHERE: (0, 1),
    BuiltinManifold.ELLIPSE: (0, 2),
    BuiltinManifold.ELLIPSOID: (0, 3),
    BuiltinManifold.TORUS: (0, 2),
    BuiltinManifold.ORTHO_COLUMNS: (0, 2),
}


def parse_manifold(spec: str) -> ConstraintMap:
    """
    Build a builtin manifold from `name[:p1,p2,...]`.

    Example:
        >>> parse_manifold("ellipse:2.0,1.0").label
        'ellipse:2,1'
        >>> parse_manifold("ortho_columns:5,2").codim
        3

    Raises:
        ValidationError: On unknown names, wrong arity or malformed numbers
    """
    name, _, tail = spec.strip().partition(":")
    key = name.strip().lower().replace("-", "_")
    if key == "stiefel":
        key = BuiltinManifold.ORTHO_COLUMNS.value
    try:
        kind = BuiltinManifold(key)
    except ValueError:
        raise ValidationError(
            f"Unknown manifold '{name}'",
            details={"choices": ", ".join(m.value for m in BuiltinManifold)},
        ) from None

    try:
        params = [float(p) for p in tail.split(",")] if tail.strip() else []
    except ValueError:
        raise ValidationError(f"Malformed parameters in manifold spec '{spec}'") from None

    if len(params) not in _ARITY[kind]:
        raise ValidationError(
            f"Manifold '{kind.value}' takes {' or '.join(map(str, _ARITY[kind]))} parameters",
            details={"given": len(params)},
        )
    if kind in _INTEGER_PARAMS:
        if not all(p.is_integer() for p in params):
            raise ValidationError(f"Manifold '{kind.value}' takes integer parameters")
        return _BUILDERS[kind](*(int(p) for p in params))
    return _BUILDERS[kind](*params)

"""
Tests for Constraint Manifolds
==============================
"""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays
from scipy import linalg

from retraction_kit.exceptions import (
    OffManifoldError,
    RankDeficientError,
    SingularError,
    ValidationError,
)
from retraction_kit.manifolds import (
    ConstraintMap,
    augmented_inverse_norm,
    augmented_norm,
    canonical_tangent,
    check_jacobian,
    make_point,
    make_tangent,
    newton_step,
    normal_complement,
    parse_manifold,
    pinv_norm,
    pseudoinverse_norm,
    random_tangent,
    solve_cross,
    solve_spd,
    sphere,
    tangent_project,
    torus,
)

finite = st.floats(min_value=-3.0, max_value=3.0, allow_nan=False, allow_infinity=False)


class TestConstraintMap:
    def test_dimensions(self, stiefel_map):
        assert stiefel_map.ambient_dim == 10
        assert stiefel_map.codim == 3
        assert stiefel_map.manifold_dim == 7

    @pytest.mark.parametrize("n,c", [(2, 0), (2, 2), (3, 5)])
    def test_rejects_bad_codim(self, n, c):
        with pytest.raises(ValidationError):
            ConstraintMap(
                ambient_dim=n,
                codim=c,
                eval_fn=lambda x: np.zeros(1),
                jacobian_fn=lambda x: np.zeros((1, n)),
            )

    def test_anchor_lies_on_manifold(self, any_builtin):
        point = any_builtin.anchor_point()
        assert point.residual <= 1e-12

    def test_sampler_lies_on_manifold(self, any_builtin, rng):
        for _ in range(20):
            x = any_builtin.sample_point(rng)
            assert np.linalg.norm(any_builtin.eval(x)) <= 1e-10

    def test_jacobian_matches_finite_differences(self, any_builtin, rng):
        for _ in range(50):
            x = any_builtin.sample_point(rng)
            assert check_jacobian(any_builtin, x) <= 1e-5

    def test_full_row_rank_on_manifold(self, any_builtin, rng):
        for _ in range(20):
            s = linalg.svdvals(any_builtin.jacobian(any_builtin.sample_point(rng)))
            assert s.min() > 1e-10 * s.max()

    def test_second_derivative_fallback_matches_closed_form(self, torus_map, rng):
        plain = ConstraintMap(
            ambient_dim=3,
            codim=1,
            eval_fn=torus_map.eval_fn,
            jacobian_fn=torus_map.jacobian_fn,
        )
        x = torus_map.sample_point(rng)
        v = rng.standard_normal(3)
        assert plain.second_derivative(x, v) == pytest.approx(
            torus_map.second_derivative(x, v), rel=1e-6, abs=1e-6
        )

    def test_lagrangian_hessian_of_sphere(self, sphere_map):
        H = sphere_map.lagrangian_hessian(np.array([0.0, 0.6, 0.8]), np.array([1.5]))
        np.testing.assert_allclose(H, 3.0 * np.eye(3), atol=1e-12)

    def test_missing_sampler(self):
        F = ConstraintMap(
            ambient_dim=2,
            codim=1,
            eval_fn=lambda x: np.array([x @ x - 1.0]),
            jacobian_fn=lambda x: 2.0 * x[np.newaxis, :],
        )
        with pytest.raises(ValidationError):
            F.sample_point(np.random.default_rng(0))
        with pytest.raises(ValidationError):
            F.anchor_point()


class TestPoints:
    def test_make_point(self, circle_map):
        point = make_point(circle_map, [0.6, 0.8])
        assert point.residual == pytest.approx(0.0, abs=1e-15)

    def test_make_point_off_manifold(self, circle_map):
        with pytest.raises(OffManifoldError):
            make_point(circle_map, [1.1, 0.0])

    def test_make_point_wrong_dimension(self, circle_map):
        with pytest.raises(ValidationError):
            make_point(circle_map, [1.0, 0.0, 0.0])

    def test_make_tangent_rejects_normal_vector(self, circle_map):
        with pytest.raises(ValidationError):
            make_tangent(circle_map, [1.0, 0.0], [0.5, 0.5])

    def test_make_tangent(self, circle_map):
        v = make_tangent(circle_map, [1.0, 0.0], [0.0, 2.0])
        assert v.norm == 2.0


class TestNewtonStep:
    def test_circle_outside(self, circle_map):
        delta, ops = newton_step(circle_map, [2.0, 0.0])
        np.testing.assert_allclose(delta, [-0.75, 0.0])
        assert ops > 0

    def test_circle_near(self, circle_map):
        delta, _ = newton_step(circle_map, [1.25, 0.0])
        np.testing.assert_allclose(delta, [-0.225, 0.0])

    def test_zero_on_manifold(self, circle_map):
        delta, _ = newton_step(circle_map, [0.6, 0.8])
        np.testing.assert_allclose(delta, [0.0, 0.0], atol=1e-15)

    def test_rank_deficient_at_origin(self, circle_map):
        with pytest.raises(RankDeficientError):
            newton_step(circle_map, [0.0, 0.0])

    @settings(max_examples=50, deadline=None)
    @given(arrays(np.float64, 10, elements=finite))
    def test_step_lies_in_row_space(self, x):
        F = parse_manifold("ortho_columns:5,2")
        try:
            delta, _ = newton_step(F, x)
        except RankDeficientError:
            return
        J = F.jacobian(x)
        # δ in the row space of J means (I − J†J) δ = 0
        coeffs = np.linalg.lstsq(J.T, delta, rcond=None)[0]
        np.testing.assert_allclose(J.T @ coeffs, delta, atol=1e-8 * max(1.0, np.linalg.norm(delta)))


class TestTangentProject:
    def test_circle(self, circle_map):
        t = tangent_project(circle_map, [1.0, 0.0], [3.0, 4.0])
        np.testing.assert_allclose(t.direction, [0.0, 4.0], atol=1e-15)

    def test_sphere(self, sphere_map):
        t = tangent_project(sphere_map, [0.0, 0.0, 1.0], [1.0, 2.0, 5.0])
        np.testing.assert_allclose(t.direction, [1.0, 2.0, 0.0], atol=1e-15)

    def test_tangent_vector_unchanged(self, ellipse_map):
        x = ellipse_map.anchor_point()
        v = canonical_tangent(ellipse_map, x)
        np.testing.assert_allclose(tangent_project(ellipse_map, x, 0.3 * v).direction, 0.3 * v)

    def test_idempotent(self, stiefel_map, rng):
        x = stiefel_map.sample_point(rng)
        once = tangent_project(stiefel_map, x, rng.standard_normal(10)).direction
        twice = tangent_project(stiefel_map, x, once).direction
        np.testing.assert_allclose(once, twice, atol=1e-12)
        assert np.linalg.norm(stiefel_map.jacobian(x) @ once) <= 1e-10


class TestRandomTangent:
    def test_circle_direction(self, circle_map):
        v = random_tangent(circle_map, [1.0, 0.0], 0.5, seed=3)
        assert abs(v.direction[1]) == pytest.approx(0.5)
        assert v.direction[0] == pytest.approx(0.0, abs=1e-15)

    def test_reproducible(self, sphere_map):
        a = random_tangent(sphere_map, [1.0, 0.0, 0.0], 0.7, seed=42)
        b = random_tangent(sphere_map, [1.0, 0.0, 0.0], 0.7, seed=42)
        np.testing.assert_array_equal(a.direction, b.direction)

    def test_magnitude_and_tangency(self, torus_map, rng):
        x = torus_map.sample_point(rng)
        v = random_tangent(torus_map, x, 1.3, seed=rng)
        assert v.norm == pytest.approx(1.3)
        assert abs(torus_map.jacobian(x)[0] @ v.direction) <= 1e-8

    @pytest.mark.parametrize("magnitude", [0.0, -1.0])
    def test_rejects_nonpositive_magnitude(self, circle_map, magnitude):
        with pytest.raises(ValidationError):
            random_tangent(circle_map, [1.0, 0.0], magnitude)

    def test_canonical_tangent_is_deterministic(self, circle_map):
        t = canonical_tangent(circle_map, [1.0, 0.0])
        np.testing.assert_allclose(t, [0.0, 1.0], atol=1e-12)


class TestNormBounds:
    def test_pseudoinverse_norm_circle(self, circle_map):
        assert pseudoinverse_norm(circle_map, [1.0, 0.0]) == pytest.approx(0.5)

    def test_pseudoinverse_norm_sphere(self, sphere_map):
        assert pseudoinverse_norm(sphere_map, [0.0, 0.0, 1.0]) == pytest.approx(0.5)

    def test_pseudoinverse_norm_scaled_constraint(self):
        F = ConstraintMap(
            ambient_dim=2,
            codim=1,
            eval_fn=lambda x: np.array([2.0 * (x @ x - 1.0)]),
            jacobian_fn=lambda x: 4.0 * x[np.newaxis, :],
        )
        assert pseudoinverse_norm(F, [0.0, 1.0]) == pytest.approx(0.25)

    def test_augmented_inverse_norm_circle(self, circle_map):
        assert augmented_inverse_norm(circle_map, [1.0, 0.0], [[0.0, 1.0]]) == pytest.approx(1.0)

    def test_augmented_inverse_norm_ellipse(self, ellipse_map):
        assert augmented_inverse_norm(ellipse_map, [2.0, 0.0], [[0.0, 1.0]]) == pytest.approx(1.0)

    def test_orthonormal_rows_give_equality(self):
        J = np.array([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]])
        V = normal_complement(J)
        assert pinv_norm(J) == pytest.approx(1.0)
        assert augmented_norm(J, V) == pytest.approx(1.0)

    def test_normal_complement_rows(self, rng):
        J = rng.standard_normal((2, 5))
        V = normal_complement(J)
        assert V.shape == (3, 5)
        np.testing.assert_allclose(V @ V.T, np.eye(3), atol=1e-12)
        np.testing.assert_allclose(J @ V.T, np.zeros((2, 3)), atol=1e-12)

    def test_bound_holds_on_random_matrices(self, rng):
        for _ in range(200):
            n = int(rng.integers(2, 7))
            c = int(rng.integers(1, n))
            J = rng.standard_normal((c, n))
            assert pinv_norm(J) <= augmented_norm(J, normal_complement(J)) + 1e-9

    def test_non_square_stack(self):
        with pytest.raises(ValidationError):
            augmented_norm(np.ones((1, 3)), np.eye(3)[:1])

    def test_singular_stack(self):
        with pytest.raises(SingularError):
            augmented_norm(np.array([[1.0, 0.0]]), np.array([[1.0, 0.0]]))

    def test_rank_deficient_pinv(self):
        with pytest.raises(RankDeficientError):
            pinv_norm(np.array([[1.0, 1.0], [2.0, 2.0]]))


class TestSolvers:
    def test_solve_spd(self):
        J = np.array([[2.0, 0.0]])
        y, flops = solve_spd(J, np.array([8.0]))
        np.testing.assert_allclose(y, [2.0])
        assert flops > 0

    def test_solve_cross(self):
        J = np.array([[1.0, 1.0]])
        J0 = np.array([[2.0, 0.0]])
        y, _ = solve_cross(J, J0, np.array([4.0]))
        np.testing.assert_allclose(y, [2.0])

    def test_solve_cross_singular(self):
        J = np.array([[0.0, 1.0]])
        J0 = np.array([[1.0, 0.0]])
        with pytest.raises(SingularError):
            solve_cross(J, J0, np.array([1.0]))

    def test_gram_path_cheaper_than_cross_path(self, stiefel_map, rng):
        x = stiefel_map.sample_point(rng)
        J = stiefel_map.jacobian(x)
        rhs = np.ones(3)
        _, spd_ops = solve_spd(J, rhs)
        _, cross_ops = solve_cross(J, J, rhs)
        assert spd_ops < cross_ops


class TestParseManifold:
    @pytest.mark.parametrize(
        "spec,label,n,c",
        [
            ("circle", "circle", 2, 1),
            ("sphere", "sphere:3", 3, 1),
            ("sphere:5", "sphere:5", 5, 1),
            ("ellipse:2,1", "ellipse:2,1", 2, 1),
            ("ellipsoid", "ellipsoid:3,2,1", 3, 1),
            ("torus:3,1", "torus:3,1", 3, 1),
            ("ortho_columns:4,3", "ortho_columns:4,3", 12, 6),
            ("stiefel", "ortho_columns:5,2", 10, 3),
        ],
    )
    def test_builtins(self, spec, label, n, c):
        F = parse_manifold(spec)
        assert F.label == label
        assert F.ambient_dim == n
        assert F.codim == c

    def test_label_round_trip(self):
        F = parse_manifold("ellipse:2.5,1")
        assert parse_manifold(F.label).params == F.params

    @pytest.mark.parametrize(
        "spec",
        ["helix", "circle:2", "ellipse:2", "sphere:2.5", "ellipse:a,b", "torus:1,2", "sphere:1"],
    )
    def test_rejects(self, spec):
        with pytest.raises(ValidationError):
            parse_manifold(spec)

    def test_closed_form_geodesics(self):
        assert parse_manifold("circle").has_closed_form_geodesics
        assert sphere(4).has_closed_form_geodesics
        assert not torus().has_closed_form_geodesics

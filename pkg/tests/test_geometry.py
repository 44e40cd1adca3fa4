"""Geometric primitives: spheres, null spaces, lifting, position checks."""

import numpy as np
import pytest

from coupledalpha import (
    DegenerateInput,
    GeometryError,
    RankDeficient,
    affine_rank,
    as_point_array,
    check_coupled_general_position,
    diameter,
    equidistant_center,
    jitter,
    lift_clouds,
    min_enclosing_ball,
    null_space_basis,
    particular_solution,
)


def test_as_point_array_shapes_and_errors():
    pts = as_point_array([[0.0, 1.0], [2.0, 3.0]])
    assert pts.shape == (2, 2) and pts.dtype == float
    with pytest.raises(ValueError):
        as_point_array([[0.0, 1.0]], dim=3)
    with pytest.raises(ValueError):
        as_point_array([0.0, 1.0, 2.0])  # 1-d input is ambiguous
    with pytest.raises(ValueError):
        as_point_array([[np.nan, 0.0]])


def test_equidistant_center_right_triangle():
    # Circumcenter of a right triangle is the hypotenuse midpoint.
    sphere = equidistant_center([[0.0, 0.0], [4.0, 0.0], [0.0, 3.0]])
    assert np.allclose(sphere.center, [2.0, 1.5], atol=1e-12)
    assert sphere.radius == pytest.approx(2.5, abs=1e-12)


def test_equidistant_center_subsets_live_in_affine_hull():
    rng = np.random.default_rng(4)
    for _ in range(20):
        pts = rng.normal(size=(3, 3))  # triangle in 3-space
        sphere = equidistant_center(pts)
        dists = np.linalg.norm(pts - sphere.center, axis=1)
        assert np.allclose(dists, sphere.radius, atol=1e-9)
        # center inside the affine hull: adding its hull coordinates back
        rank_with = affine_rank(np.vstack([pts, sphere.center]))
        assert rank_with == affine_rank(pts)


def test_equidistant_center_rejects_collinear():
    with pytest.raises(DegenerateInput):
        equidistant_center([[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]])


def test_min_enclosing_ball_known_configurations():
    two = min_enclosing_ball([[0.0, 0.0], [2.0, 0.0]])
    assert two.radius == pytest.approx(1.0, abs=1e-12)
    assert np.allclose(two.center, [1.0, 0.0])
    # Obtuse triangle: ball spanned by the long edge only.
    obtuse = min_enclosing_ball([[0.0, 0.0], [4.0, 0.0], [2.0, 0.5]])
    assert obtuse.radius == pytest.approx(2.0, abs=1e-12)


def test_min_enclosing_ball_vs_subset_enumeration(rng):
    # The optimal ball is determined by at most d+1 points on its boundary.
    for _ in range(25):
        d = int(rng.integers(2, 4))
        pts = rng.random((int(rng.integers(2, 8)), d))
        ball = min_enclosing_ball(pts)
        dist = np.linalg.norm(pts - ball.center, axis=1)
        assert float(dist.max()) <= ball.radius + 1e-9
        best = np.inf
        import itertools

        for size in range(2, d + 2):
            for combo in itertools.combinations(range(len(pts)), size):
                try:
                    cand = equidistant_center(pts[list(combo)])
                except GeometryError:
                    continue
                if np.linalg.norm(pts - cand.center, axis=1).max() <= cand.radius + 1e-9:
                    best = min(best, cand.radius)
        if len(pts) == 1:
            best = 0.0
        assert ball.radius == pytest.approx(min(best, ball.radius), abs=1e-9)
        assert best <= ball.radius + 1e-9


def test_min_enclosing_ball_deterministic():
    pts = np.random.default_rng(1).random((30, 3))
    a = min_enclosing_ball(pts)
    b = min_enclosing_ball(pts)
    assert np.array_equal(a.center, b.center) and a.radius == b.radius


def test_null_space_and_particular_solution(rng):
    for _ in range(20):
        d = int(rng.integers(2, 5))
        rows = int(rng.integers(0, d))
        a = rng.normal(size=(rows, d))
        basis = null_space_basis(a, d)
        assert basis.shape == (d, d - rows)
        if rows:
            assert np.allclose(a @ basis, 0.0, atol=1e-10)
        assert np.allclose(basis.T @ basis, np.eye(d - rows), atol=1e-10)
        b = a @ rng.normal(size=d) if rows else np.zeros(0)
        sol = particular_solution(a, b, d)
        if rows:
            assert np.allclose(a @ sol, b, atol=1e-9)


def test_null_space_basis_rejects_dependent_rows():
    a = np.array([[1.0, 0.0], [2.0, 0.0]])
    with pytest.raises(RankDeficient):
        null_space_basis(a, 2)


def test_lift_clouds_heights_exact():
    x = np.array([[0.25, 0.5]])
    y = np.array([[0.75, 0.25], [0.1, 0.9]])
    lifted = lift_clouds(x, y)
    assert lifted.shape == (3, 3)
    assert np.array_equal(lifted[0], [0.25, 0.5, 0.0])
    assert np.array_equal(lifted[1:, 2], [1.0, 1.0])
    assert np.array_equal(lifted[1, :2], y[0])


def test_general_position_clean_random(rng):
    for _ in range(5):
        ok, violations = check_coupled_general_position(
            rng.random((5, 2)), rng.random((4, 2))
        )
        assert ok and violations == []


def test_general_position_flags_cocircular_square():
    square = np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]])
    ok, violations = check_coupled_general_position(square, [[0.3, 0.4]])
    assert not ok
    assert any(v.kind == "cocircular" for v in violations)


def test_general_position_flags_duplicates_across_check():
    ok, violations = check_coupled_general_position(
        [[0.0, 0.0], [0.0, 0.0]], [[1.0, 1.0]]
    )
    assert not ok
    assert any(v.kind == "duplicate" for v in violations)


def test_general_position_flags_lifted_cosphericality():
    # Symmetric cross: the four lifted X points and both lifted Y points
    # are all equidistant from (0, 0, 1/2), so some mixed (d+2)-subset's
    # circumsphere picks up an extra lifted point.
    x = np.array([[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]]) * np.sqrt(1.25)
    y = np.array([[1.0, 0.0], [-1.0, 0.0]])
    ok, violations = check_coupled_general_position(x, y)
    assert not ok
    assert any(v.kind == "lifted_cocircular" for v in violations)


def test_diameter_and_rank():
    assert diameter([[0.0, 0.0]]) == 0.0
    assert diameter([[0.0, 0.0], [3.0, 4.0]]) == pytest.approx(5.0)
    assert affine_rank([[0.0, 0.0], [1.0, 1.0], [2.0, 2.0]]) == 1


def test_jitter_reproducible_and_bounded():
    pts = np.zeros((8, 2))
    a = jitter(pts, magnitude=1e-3, seed=5)
    b = jitter(pts, magnitude=1e-3, seed=5)
    assert np.array_equal(a, b)
    assert float(np.abs(a).max()) <= 1e-3
    c = jitter(pts, magnitude=1e-3, seed=6)
    assert not np.array_equal(a, c)

"""Low-dimensional metric primitives.

Circumspheres, smallest enclosing balls, bisector (equidistance) systems,
and the coupled general-position check. Everything works on plain float64
numpy arrays: a point is a row of shape ``(d,)``, a point set an array of
shape ``(n, d)``.

There is no exact arithmetic. Predicates share one absolute/relative
tolerance ``EPS``; rank decisions use the tighter ``RANK_RCOND`` cutoff.
Inputs closer than the tolerance to a degenerate configuration are
rejected with an error rather than silently perturbed -- ``jitter`` is
the explicit way out for callers that want perturbation.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

# Tolerance for geometric predicates (inside / on-boundary decisions).
EPS = 1e-9
# Relative singular-value cutoff for rank decisions in least-squares solves.
RANK_RCOND = 1e-12


class GeometryError(ValueError):
    """Base class for geometric failures in this package."""


class DegenerateInput(GeometryError):
    """Input points are affinely dependent or otherwise singular."""


class RankDeficient(GeometryError):
    """A bisector system lost rank; signals a general-position failure."""


class GeneralPositionError(GeometryError):
    """A point-cloud pair violates coupled general position."""

    def __init__(self, violations: list["Violation"]):
        self.violations = violations
        preview = ", ".join(str(v) for v in violations[:3])
        more = "" if len(violations) <= 3 else f" (+{len(violations) - 3} more)"
        super().__init__(f"general position violated: {preview}{more}")


@dataclass(frozen=True, eq=False)
class Sphere:
    """A sphere given by center and radius."""

    center: np.ndarray
    radius: float


@dataclass(frozen=True)
class Violation:
    """One general-position violation, with global vertex indices."""

    kind: str
    indices: tuple[int, ...]

    def __str__(self) -> str:
        return f"{self.kind}{self.indices}"


def as_point_array(points, dim: int | None = None) -> np.ndarray:
    """Validate and convert to a float64 array of shape (n, d)."""
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1 and pts.size == 0:
        pts = pts.reshape(0, dim if dim is not None else 0)
    if pts.ndim != 2:
        raise ValueError(f"expected a 2-d point array, got shape {pts.shape}")
    if dim is not None and pts.shape[1] != dim:
        raise ValueError(f"expected points of dimension {dim}, got {pts.shape[1]}")
    if pts.size and not np.isfinite(pts).all():
        raise ValueError("points must be finite")
    return pts


def _circumsphere(points: np.ndarray, eps: float = EPS) -> Sphere | None:
    """Smallest sphere through all of ``points``, or None if no such sphere.

    The center is the projection of the first point onto the affine set of
    points equidistant from all inputs; this is the circumcenter inside the
    affine hull. Returns None when the points are affinely dependent (or,
    for more than d+1 points, not cospherical).
    """
    pts = np.asarray(points, dtype=float)
    base = pts[0]
    rel = pts[1:] - base
    if rel.shape[0] == 0:
        return Sphere(base.copy(), 0.0)
    rhs = 0.5 * np.einsum("ij,ij->i", rel, rel)
    sol, _, rank, _ = np.linalg.lstsq(rel, rhs, rcond=RANK_RCOND)
    if rank < min(rel.shape):
        return None
    scale = 1.0 + float(np.abs(rhs).max())
    if rank < rel.shape[0]:
        # Overdetermined system: valid only if the points are cospherical.
        if float(np.abs(rel @ sol - rhs).max()) > eps * scale:
            return None
    radius = float(np.linalg.norm(sol))
    return Sphere(base + sol, radius)


def equidistant_center(points, eps: float = EPS) -> Sphere:
    """Center and radius of the unique sphere through k <= d+1 points.

    The center is the point of the bisector solution set closest to the
    inputs, i.e. the circumcenter within the affine hull of the points.

    Raises DegenerateInput if the points are affinely dependent beyond
    tolerance (this includes any input with more than d+1 points, which is
    always affinely dependent).
    """
    pts = as_point_array(points)
    if pts.shape[0] == 0:
        raise ValueError("need at least one point")
    sphere = _circumsphere(pts, eps)
    if sphere is None:
        raise DegenerateInput(
            f"no circumsphere: {pts.shape[0]} points in R^{pts.shape[1]} "
            "are affinely dependent beyond tolerance"
        )
    return sphere


def min_enclosing_ball(points, eps: float = EPS) -> Sphere:
    """Smallest ball containing all points (Welzl's algorithm).

    Deterministic: the internal randomized order is drawn from a fixed
    seed, so repeated calls return bit-identical results.
    """
    pts = as_point_array(points)
    n, d = pts.shape
    if n == 0:
        raise ValueError("need at least one point")
    order = list(np.random.default_rng(9221).permutation(n))

    def ball_on_boundary(boundary: list[int]) -> Sphere | None:
        if not boundary:
            return None
        if len(boundary) == 1:
            return Sphere(pts[boundary[0]].copy(), 0.0)
        sphere = _circumsphere(pts[boundary], eps)
        if sphere is not None:
            return sphere
        # Degenerate support set (affinely dependent boundary): fall back to
        # the smallest ball through a proper subset that still covers it.
        best = None
        for k in range(1, len(boundary)):
            for sub in itertools.combinations(boundary, k):
                cand = ball_on_boundary(list(sub))
                if cand is None:
                    continue
                if all(contains(cand, i) for i in boundary):
                    if best is None or cand.radius < best.radius:
                        best = cand
        return best

    def contains(sphere: Sphere, idx: int) -> bool:
        slack = 1e-10 * (1.0 + sphere.radius)
        return float(np.linalg.norm(pts[idx] - sphere.center)) <= sphere.radius + slack

    def welzl(head: int, boundary: list[int]) -> Sphere | None:
        # head = number of points of `order` still under consideration.
        if head == 0 or len(boundary) == d + 1:
            return ball_on_boundary(boundary)
        p = order[head - 1]
        ball = welzl(head - 1, boundary)
        if ball is not None and contains(ball, p):
            return ball
        return welzl(head - 1, boundary + [p])

    ball = welzl(n, [])
    if ball is None:  # pragma: no cover - n >= 1 always yields a ball
        raise DegenerateInput("failed to compute enclosing ball")
    return ball


def null_space_basis(a: np.ndarray, dim: int | None = None) -> np.ndarray:
    """Orthonormal basis of the kernel of ``a`` as columns of a (d, k) array.

    An empty constraint matrix (zero rows) has the identity as its basis.
    Raises RankDeficient if the rows of ``a`` are linearly dependent.
    """
    a = np.asarray(a, dtype=float)
    if a.ndim != 2:
        raise ValueError("expected a 2-d matrix")
    rows, cols = a.shape
    if dim is not None and cols != dim:
        raise ValueError(f"expected {dim} columns, got {cols}")
    if rows == 0:
        return np.eye(cols)
    _, s, vt = np.linalg.svd(a, full_matrices=True)
    cutoff = max(a.shape) * RANK_RCOND * (s[0] if s.size else 0.0)
    rank = int((s > cutoff).sum())
    if rank < rows:
        raise RankDeficient(f"matrix rows are dependent (rank {rank} < {rows})")
    return vt[rank:].T.copy()


def particular_solution(a: np.ndarray, b: np.ndarray, dim: int | None = None) -> np.ndarray:
    """Minimum-norm solution of ``a @ c = b``.

    Canonicalized to the minimum-norm solution so results are reproducible.
    An empty system returns the origin. Raises RankDeficient when the rows
    of ``a`` are dependent.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float).reshape(-1)
    if a.ndim != 2:
        raise ValueError("expected a 2-d matrix")
    rows, cols = a.shape
    if dim is not None and cols != dim:
        raise ValueError(f"expected {dim} columns, got {cols}")
    if rows != b.shape[0]:
        raise ValueError("matrix and rhs row counts differ")
    if rows == 0:
        return np.zeros(cols)
    sol, _, rank, _ = np.linalg.lstsq(a, b, rcond=RANK_RCOND)
    if rank < rows:
        raise RankDeficient(f"matrix rows are dependent (rank {rank} < {rows})")
    return sol


def lift_clouds(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Embed X at height 0 and Y at height 1 in one extra dimension."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    lifted = np.zeros((x.shape[0] + y.shape[0], x.shape[1] + 1))
    lifted[: x.shape[0], :-1] = x
    lifted[x.shape[0] :, :-1] = y
    lifted[x.shape[0] :, -1] = 1.0
    return lifted


def _sphere_violations(
    pts: np.ndarray,
    subset: tuple[int, ...],
    kind: str,
    eps: float,
    index_map,
    out: list[Violation],
) -> None:
    """Append a violation for every point within eps of the subset's circumsphere."""
    sphere = _circumsphere(pts[list(subset)], eps)
    if sphere is None:
        return
    dist = np.linalg.norm(pts - sphere.center, axis=1)
    tol = eps * (1.0 + sphere.radius)
    near = np.nonzero(np.abs(dist - sphere.radius) <= tol)[0]
    members = set(subset)
    for idx in near:
        if int(idx) not in members:
            out.append(
                Violation(kind, tuple(index_map(i) for i in subset) + (index_map(int(idx)),))
            )


def check_coupled_general_position(x, y, eps: float = EPS) -> tuple[bool, list[Violation]]:
    """Check coupled general position for a pair of clouds in R^d.

    Each cloud on its own must be in general position: no d+1 points on a
    common (d-1)-flat, and no further point of the same cloud on the
    circumsphere of any d+1 of them. On top of that, for every mixed
    (d+2)-subset of the lifted clouds (X at height 0, Y at height 1) that
    spans a circumsphere, no other lifted point may lie on that sphere.

    Returns (ok, violations); violations carry global vertex indices,
    X first and then Y.

    Exhaustive over subsets, so intended for small inputs. At scale the
    triangulation itself reports ambiguities for the subsets that matter.
    """
    x = as_point_array(x)
    y = as_point_array(y, dim=x.shape[1] if x.size else None)
    if x.shape[0] and y.shape[0] and x.shape[1] != y.shape[1]:
        raise ValueError("clouds must share the ambient dimension")
    d = x.shape[1] if x.shape[0] else y.shape[1]
    if x.shape[0] == 0:
        x = x.reshape(0, d)
    if y.shape[0] == 0:
        y = y.reshape(0, d)
    violations: list[Violation] = []

    for offset, cloud in ((0, x), (x.shape[0], y)):
        n = cloud.shape[0]
        if n >= 2:
            diff = cloud[:, None, :] - cloud[None, :, :]
            dist = np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))
            for i, j in zip(*np.nonzero(np.triu(dist <= eps, k=1))):
                violations.append(Violation("duplicate", (offset + int(i), offset + int(j))))
        if n >= d + 1:
            for subset in itertools.combinations(range(n), d + 1):
                sub = cloud[list(subset)]
                if _affine_rank(sub) < d:
                    violations.append(
                        Violation("flat", tuple(offset + i for i in subset))
                    )
                    continue
                _sphere_violations(
                    cloud, subset, "cocircular", eps, lambda i, o=offset: o + i, violations
                )

    lifted = lift_clouds(x, y)
    n_x, n_y = x.shape[0], y.shape[0]
    for size_x in range(1, d + 2):
        size_y = d + 2 - size_x
        if size_x > n_x or size_y < 1 or size_y > n_y:
            continue
        for cx in itertools.combinations(range(n_x), size_x):
            for cy in itertools.combinations(range(n_x, n_x + n_y), size_y):
                _sphere_violations(
                    lifted, cx + cy, "lifted_cocircular", eps, lambda i: i, violations
                )

    return (not violations, violations)


def _affine_rank(points: np.ndarray, rcond: float = RANK_RCOND) -> int:
    """Dimension of the affine hull of the points."""
    if points.shape[0] <= 1:
        return 0
    centered = points - points.mean(axis=0)
    s = np.linalg.svd(centered, compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int((s > rcond * max(points.shape) * s[0]).sum())


def affine_rank(points) -> int:
    """Public wrapper: dimension of the affine hull of a point set."""
    return _affine_rank(as_point_array(points))


def diameter(points) -> float:
    """Largest pairwise distance (0 for fewer than two points)."""
    pts = as_point_array(points)
    if pts.shape[0] < 2:
        return 0.0
    diff = pts[:, None, :] - pts[None, :, :]
    return float(np.sqrt(np.einsum("ijk,ijk->ij", diff, diff).max()))


def jitter(points, magnitude: float | None = None, seed: int | None = None) -> np.ndarray:
    """Return a copy of the points with uniform noise added per coordinate.

    Default magnitude is 1e-6 times the bounding-box diagonal, a cheap
    stand-in for the diameter. Meant for callers that hit degeneracy
    errors and explicitly want general position restored.
    """
    pts = as_point_array(points).copy()
    if pts.shape[0] == 0:
        return pts
    if magnitude is None:
        box = pts.max(axis=0) - pts.min(axis=0)
        magnitude = 1e-6 * float(np.linalg.norm(box))
        if magnitude == 0.0:
            magnitude = 1e-6
    rng = np.random.default_rng(seed)
    return pts + rng.uniform(-magnitude, magnitude, size=pts.shape)

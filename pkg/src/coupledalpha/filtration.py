"""Filtration values for coupled alpha complexes.

The value of a simplex Q is the smallest radius r at which the restricted
Voronoi balls of its vertices (each restricted within its own cloud) have
a common point. Values are computed top-down:

* ``relaxed_value`` solves the relaxation that ignores the Voronoi
  restriction: minimize the larger of the two cloud radii over the affine
  set of centers equidistant from Q's X part and, separately, from its Y
  part. The minimizer is one of three candidates -- the X-side projection
  if its X radius dominates there, else the Y-side projection if its Y
  radius dominates there, else the center of the smallest sphere through
  all of Q.
* ``coupled_gabriel`` decides whether that relaxed solution is feasible
  for the original problem relative to one coface: the open X ball around
  the relaxed center must avoid the coface's X vertices and the open Y
  ball its Y vertices. For a pure simplex this degenerates to the
  classical one-ball Gabriel test against its own cloud.
* ``coupled_filtration`` walks the complex from the top dimension down:
  a simplex that passes the Gabriel test against every coface keeps its
  relaxed value, anything else inherits the minimum over its cofaces.

Vertices get value 0 and values are monotone along face inclusions by
construction. The unset state during the walk is explicit, never a float
sentinel.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .complexes import CoupledComplex, PointCloudPair, Simplex, alpha_infty
from .geometry import (
    EPS,
    RANK_RCOND,
    GeometryError,
    RankDeficient,
    _circumsphere,
    as_point_array,
    null_space_basis,
)

X_DOMINANT = "X_DOMINANT"
Y_DOMINANT = "Y_DOMINANT"
CIRCUMSPHERE = "CIRCUMSPHERE"

# Absolute slack when comparing the two candidate radii for dominance.
_TIE_EPS = 1e-12


class DimensionOverflow(GeometryError):
    """A simplex has more vertices than the ambient dimension allows."""


class NotACoface(ValueError):
    """The pair of simplices is not a codimension-1 face/coface pair."""


@dataclass(frozen=True, eq=False)
class SphereSolution:
    """Solution of the relaxed two-ball problem for one simplex.

    ``radius_x`` is the distance from the center to the simplex's X
    vertices, ``radius_y`` to its Y vertices (0.0 for an absent side).
    The relaxed value is the larger of the two.
    """

    center: np.ndarray
    radius_x: float
    radius_y: float
    case: str

    @property
    def relaxed_radius(self) -> float:
        return max(self.radius_x, self.radius_y)


@dataclass(eq=False)
class FilteredComplex:
    """Simplices with filtration values, sorted by (value, dim, lex)."""

    values: dict[Simplex, float]
    source: CoupledComplex | None = None

    def sorted_items(self) -> list[tuple[Simplex, float]]:
        return sorted(self.values.items(), key=lambda kv: (kv[1], len(kv[0]), kv[0]))

    def simplices(self) -> list[Simplex]:
        return sorted(self.values, key=lambda s: (len(s), s))

    def max_value(self) -> float:
        return max(self.values.values(), default=0.0)

    def at_radius(self, radius: float) -> list[Simplex]:
        """Simplices present at the given radius."""
        return [s for s, v in self.values.items() if v <= radius]

    def check_monotone(self, tol: float = 0.0) -> bool:
        """True iff every simplex's value is >= each of its facets' values."""
        for simplex, value in self.values.items():
            if len(simplex) == 1:
                continue
            for drop in range(len(simplex)):
                facet = simplex[:drop] + simplex[drop + 1 :]
                if self.values[facet] > value + tol:
                    return False
        return True


def _projection_on_solutions(
    basis: np.ndarray, anchor: np.ndarray, point: np.ndarray
) -> np.ndarray:
    """Project ``point`` onto the affine set {anchor + basis @ s}."""
    return anchor + basis @ (basis.T @ (point - anchor))


def _min_norm_consistent(a: np.ndarray, b: np.ndarray, eps: float) -> np.ndarray:
    """Minimum-norm solution of a consistent system; rejects inconsistency."""
    sol, _, _, _ = np.linalg.lstsq(a, b, rcond=RANK_RCOND)
    scale = 1.0 + float(np.abs(b).max(initial=0.0))
    if float(np.abs(a @ sol - b).max(initial=0.0)) > eps * scale:
        raise RankDeficient("bisector system has no common solution")
    return sol


def relaxed_value(q_x, q_y, eps: float = EPS) -> SphereSolution:
    """Solve the relaxed smallest-radius problem for a labeled simplex.

    ``q_x`` and ``q_y`` are the simplex's vertex coordinates per cloud;
    either side may be empty. The center returned is equidistant from all
    X vertices and from all Y vertices, minimizing the larger of the two
    distances over the bisector solution set.
    """
    q_x = as_point_array(q_x) if q_x is not None else np.zeros((0, 0))
    if q_y is None:
        q_y = np.zeros((0, q_x.shape[1]))
    q_y = as_point_array(q_y, dim=q_x.shape[1] if q_x.size else None)
    n_x, n_y = q_x.shape[0], q_y.shape[0]
    if n_x == 0 and n_y == 0:
        raise ValueError("need at least one vertex")
    dim = q_x.shape[1] if n_x else q_y.shape[1]
    if n_x + n_y > dim + 2:
        raise DimensionOverflow(
            f"{n_x + n_y} vertices exceed the maximum simplex size {dim + 2} in R^{dim}"
        )

    if n_y == 0 or n_x == 0:
        pts = q_x if n_y == 0 else q_y
        sphere = _circumsphere(pts, eps)
        if sphere is None:
            raise RankDeficient("pure simplex vertices are affinely dependent")
        if n_y == 0:
            return SphereSolution(sphere.center, sphere.radius, 0.0, X_DOMINANT)
        return SphereSolution(sphere.center, 0.0, sphere.radius, Y_DOMINANT)

    # Work in coordinates shifted to the simplex centroid for conditioning.
    shift = np.vstack([q_x, q_y]).mean(axis=0)
    px = q_x - shift
    py = q_y - shift
    x1, y1 = px[0], py[0]
    rows = [px[1:] - x1, py[1:] - y1]
    a = np.vstack([r for r in rows if r.size]) if n_x + n_y > 2 else np.zeros((0, dim))
    rhs = np.concatenate(
        [
            0.5 * (np.einsum("ij,ij->i", px[1:], px[1:]) - x1 @ x1),
            0.5 * (np.einsum("ij,ij->i", py[1:], py[1:]) - y1 @ y1),
        ]
    )
    basis = null_space_basis(a, dim)  # raises RankDeficient on dependent rows
    anchor = _min_norm_consistent(a, rhs, eps) if a.shape[0] else np.zeros(dim)

    c_x = _projection_on_solutions(basis, anchor, x1)
    r_xx = float(np.linalg.norm(c_x - x1))
    r_xy = float(np.linalg.norm(c_x - y1))
    if r_xx >= r_xy - _TIE_EPS:
        return SphereSolution(c_x + shift, r_xx, r_xy, X_DOMINANT)

    c_y = _projection_on_solutions(basis, anchor, y1)
    r_yx = float(np.linalg.norm(c_y - x1))
    r_yy = float(np.linalg.norm(c_y - y1))
    if r_yx <= r_yy + _TIE_EPS:
        return SphereSolution(c_y + shift, r_yx, r_yy, Y_DOMINANT)

    # Both radii active: the minimizer is equidistant from every vertex of
    # the simplex, i.e. the center of the smallest sphere through all of it.
    a_full = np.vstack([a, (y1 - x1)[None, :]])
    rhs_full = np.concatenate([rhs, [0.5 * (y1 @ y1 - x1 @ x1)]])
    offset = _min_norm_consistent(a_full, rhs_full - a_full @ x1, eps)
    center = x1 + offset
    r_x = float(np.linalg.norm(center - x1))
    r_y = float(np.linalg.norm(center - y1))
    return SphereSolution(center + shift, r_x, r_y, CIRCUMSPHERE)


def _vertex_outside(
    solution: SphereSolution,
    pure_x: bool,
    pure_y: bool,
    vertex_side: str,
    vertex: np.ndarray,
    eps: float,
) -> bool:
    """Is the coface vertex excluded from the relevant open ball?

    For a pure simplex the ball of the absent cloud is empty, so vertices
    from the other cloud never obstruct; this reduces to the classical
    Gabriel test within the simplex's own cloud.
    """
    if vertex_side == "x":
        if pure_y:
            return True
        radius = solution.radius_x
    else:
        if pure_x:
            return True
        radius = solution.radius_y
    dist = float(np.linalg.norm(vertex - solution.center))
    return dist >= radius - eps * (1.0 + radius)


def coupled_gabriel(
    p: Simplex,
    q: Simplex,
    pair: PointCloudPair,
    solution: SphereSolution | None = None,
    eps: float | None = None,
) -> bool:
    """Coupled Gabriel test for a codimension-1 coface pair (p over q).

    True iff the relaxed solution of q keeps the extra vertex of p outside
    the open ball of its own cloud. When q passes this for every coface,
    its filtration value equals its relaxed value.
    """
    eps = pair.eps if eps is None else eps
    p = tuple(p)
    q = tuple(q)
    extra = set(p) - set(q)
    if len(p) != len(q) + 1 or len(extra) != 1 or not set(q) <= set(p):
        raise NotACoface(f"{q} is not a codimension-1 face of {p}")
    if solution is None:
        q_x, q_y = pair.split_coords(q)
        solution = relaxed_value(q_x, q_y, eps)
    v = extra.pop()
    qx, qy = pair.split(q)
    return _vertex_outside(
        solution, not qy, not qx, pair.side(v), pair.points[v], eps
    )


def coupled_filtration(cplx: CoupledComplex, eps: float | None = None) -> FilteredComplex:
    """Assign filtration values to every simplex of a coupled complex.

    Processes dimensions from the top down. Each simplex starts unset;
    once its cofaces are valued, it either keeps its own relaxed value
    (coupled Gabriel against all cofaces) or inherits the smallest coface
    value. The minimum with the coface values is always taken, which makes
    the result monotone under float arithmetic too.
    """
    pair = cplx.pair
    eps = pair.eps if eps is None else eps
    values: dict[Simplex, float] = {}
    # For each not-yet-valued simplex: [min coface value, extra vertices of cofaces]
    pending: dict[Simplex, list] = {}

    for k in range(cplx.dimension, -1, -1):
        for simplex in cplx.by_dim(k):
            if k == 0:
                values[simplex] = 0.0
                continue
            q_x, q_y = pair.split_coords(simplex)
            solution = relaxed_value(q_x, q_y, eps)
            min_coface, extras = pending.pop(simplex, [math.inf, []])
            qx, qy = pair.split(simplex)
            gabriel = all(
                _vertex_outside(
                    solution, not qy, not qx, pair.side(v), pair.points[v], eps
                )
                for v in extras
            )
            if gabriel:
                value = min(solution.relaxed_radius, min_coface)
            else:
                value = min_coface
            values[simplex] = value
            for drop in range(k + 1):
                facet = simplex[:drop] + simplex[drop + 1 :]
                entry = pending.setdefault(facet, [math.inf, []])
                entry[0] = min(entry[0], value)
                entry[1].append(simplex[drop])
    # Vertex entries remain in pending (their value is fixed at 0); top
    # simplices never appear in pending at all.
    return FilteredComplex(values, source=cplx)


def alpha_filtration(points, method: str = "incremental", eps: float = EPS) -> FilteredComplex:
    """Alpha filtration of a single cloud.

    The one-cloud specialization of the coupled machinery: the complex is
    the Delaunay closure and every simplex is pure, so the relaxed value
    is the circumsphere radius and the Gabriel test is the classical one.
    """
    return coupled_filtration(alpha_infty(points, method=method, eps=eps), eps=eps)

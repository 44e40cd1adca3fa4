"""Shared helpers: independent reference constructions used across tests.

Everything here is deliberately built from definitions, not from the
library's fast paths, so the tests compare two independent routes.
"""

import itertools

import numpy as np
import pytest

from coupledalpha import PointCloudPair, feasibility


def random_pair(rng, dim=2, max_x=6, max_y=6, check=False):
    """Uniform clouds in the unit cube with nonempty X and Y."""
    n_x = int(rng.integers(1, max_x + 1))
    n_y = int(rng.integers(1, max_y + 1))
    return PointCloudPair(rng.random((n_x, dim)), rng.random((n_y, dim)), check=check)


def nerve_from_feasibility(pair, max_size):
    """Simplex set at r = infinity straight from the nerve definition.

    Enumerates subsets by size with face pruning: a subset is only tested
    when all its facets are already members, which is sound because the
    nerve of a cover is closed under faces by definition.
    """
    members = set()
    current = []
    for v in range(pair.n_total):
        if feasibility((v,), pair):
            members.add((v,))
            current.append((v,))
    for size in range(2, max_size + 1):
        grown = []
        for combo in itertools.combinations(range(pair.n_total), size):
            if any(combo[:k] + combo[k + 1 :] not in members for k in range(size)):
                continue
            if feasibility(combo, pair):
                members.add(combo)
                grown.append(combo)
        if not grown:
            break
        current = grown
    return members


def golden_min(fun, lo, hi, tol=1e-9):
    """Golden-section minimum of a unimodal function on [lo, hi]."""
    invphi = (np.sqrt(5.0) - 1.0) / 2.0
    a = hi - invphi * (hi - lo)
    b = lo + invphi * (hi - lo)
    fa, fb = fun(a), fun(b)
    while hi - lo > tol:
        if fa < fb:
            hi, b, fb = b, a, fa
            a = hi - invphi * (hi - lo)
            fa = fun(a)
        else:
            lo, a, fa = a, b, fb
            b = lo + invphi * (hi - lo)
            fb = fun(b)
    return fun(0.5 * (lo + hi))


def minimize_relaxed(q_x, q_y, tol=1e-9):
    """Relaxed smallest-radius value by constrained golden-section search.

    Parameterizes the set of centers equidistant within each cloud part
    directly from the bisector equations, then minimizes the larger of
    the two representative distances by golden-section search nested over
    the free directions. The objective is convex, so every level of the
    nest is unimodal. A plain grid stalls here: near symmetric inputs the
    descent cone of the max gets arbitrarily narrow.
    """
    q_x = np.asarray(q_x, dtype=float)
    q_y = np.asarray(q_y, dtype=float)
    dim = q_x.shape[1] if q_x.size else q_y.shape[1]
    reps = [p[0] for p in (q_x, q_y) if p.shape[0]]
    rows = [p[1:] - p[0] for p in (q_x, q_y) if p.shape[0] > 1]
    if rows:
        a = np.vstack(rows)
        b = np.concatenate(
            [
                0.5 * (np.einsum("ij,ij->i", p[1:], p[1:]) - p[0] @ p[0])
                for p in (q_x, q_y)
                if p.shape[0] > 1
            ]
        )
        anchor, *_ = np.linalg.lstsq(a, b, rcond=None)
        assert np.allclose(a @ anchor, b, atol=1e-9), "no equidistant center"
        _, s, vt = np.linalg.svd(a)
        rank = int((s > 1e-12 * max(a.shape) * (s[0] if s.size else 1.0)).sum())
        basis = vt[rank:].T
    else:
        anchor = np.zeros(dim)
        basis = np.eye(dim)

    def value(params):
        center = anchor + basis @ params
        return max(float(np.linalg.norm(center - rep)) for rep in reps)

    k = basis.shape[1]
    if k == 0:
        return value(np.zeros(0))
    allpts = np.vstack([p for p in (q_x, q_y) if p.size])
    half = float(max(np.linalg.norm(allpts - anchor, axis=1).max(), 1.0)) * 4.0

    def level(prefix):
        if len(prefix) == k:
            return value(np.array(prefix))
        return golden_min(lambda t: level(prefix + [t]), -half, half, tol)

    return level([])


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)

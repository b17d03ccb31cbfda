"""Exact convex hull volumes of integer point sets in dimension 1, 2 and 3.

Volumes are returned as exact Fractions. In dimension 3 scipy's Qhull proposes
the facets, and every facet is then re-verified in integer arithmetic; a
facet set that fails verification raises instead of returning a number.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

import numpy as np
from scipy.spatial import ConvexHull


class HullVerificationError(RuntimeError):
    pass


def affine_dimension(points: np.ndarray) -> int:
    """Exact dimension of the affine hull of integer points."""
    from .series import exact_rank

    pts = np.asarray(points, dtype=np.int64)
    if pts.shape[0] <= 1:
        return 0
    diff = pts - pts[0]
    # Gram matrix has the same rank as diff; small and exact
    peak = int(np.abs(diff).max())
    if peak == 0:
        return 0
    if diff.shape[0] * peak * peak < 2**62:
        gram = diff.T @ diff
    else:
        gram = diff.T.astype(object) @ diff.astype(object)
    return exact_rank(gram.tolist())


def _cross(o, a, b) -> int:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def hull_2d(points: np.ndarray) -> list[tuple[int, int]]:
    """Counter-clockwise hull vertices (monotone chain), collinear points dropped."""
    pts = sorted(set(map(tuple, np.asarray(points, dtype=np.int64).tolist())))
    if len(pts) <= 2:
        return pts
    lower: list = []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list = []
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def _volume_1d(pts: np.ndarray) -> Fraction:
    return Fraction(int(pts[:, 0].max() - pts[:, 0].min()))


def _volume_2d(pts: np.ndarray) -> Fraction:
    poly = hull_2d(pts)
    twice = 0
    for (x0, y0), (x1, y1) in zip(poly, poly[1:] + poly[:1]):
        twice += x0 * y1 - x1 * y0
    return Fraction(abs(twice), 2)


def _det3(a, b, c) -> int:
    return (a[0] * (b[1] * c[2] - b[2] * c[1])
            - a[1] * (b[0] * c[2] - b[2] * c[0])
            + a[2] * (b[0] * c[1] - b[1] * c[0]))


def _volume_3d(pts: np.ndarray) -> Fraction:
    pts = np.unique(np.asarray(pts, dtype=np.int64), axis=0)
    qh = ConvexHull(pts.astype(float))
    verts = [tuple(int(x) for x in row) for row in pts]
    # interior reference point, scaled by 4 to stay integral
    base = [verts[i] for i in qh.vertices]
    ref4 = None
    for a, b, c, e in itertools.combinations(base, 4):
        u, v, w = ([q[t] - a[t] for t in range(3)] for q in (b, c, e))
        if _det3(u, v, w) != 0:
            ref4 = tuple(a[t] + b[t] + c[t] + e[t] for t in range(3))
            break
    if ref4 is None:
        raise HullVerificationError("no full-dimensional tetrahedron among hull vertices")

    pts4 = pts * 4
    edges: dict[tuple, int] = {}
    sixfold = 0
    for simplex in qh.simplices:
        a, b, c = (verts[i] for i in simplex)
        u = [b[t] - a[t] for t in range(3)]
        v = [c[t] - a[t] for t in range(3)]
        normal = np.array([u[1] * v[2] - u[2] * v[1],
                           u[2] * v[0] - u[0] * v[2],
                           u[0] * v[1] - u[1] * v[0]], dtype=object)
        if not any(normal):
            raise HullVerificationError("degenerate facet")
        a4 = np.array([4 * x for x in a], dtype=object)
        side = int(np.dot(normal, np.array(ref4, dtype=object) - a4))
        if side == 0:
            raise HullVerificationError("reference point lies on a facet plane")
        if side > 0:
            normal = -normal
            b, c = c, b
        # every point must lie weakly inside this facet's half-space
        slack = (pts4 - np.array(a4, dtype=np.int64)) @ np.array(normal, dtype=np.int64)
        if (slack > 0).any():
            raise HullVerificationError("a point lies outside a proposed facet")
        for e in ((a, b), (b, c), (c, a)):
            edges[e] = edges.get(e, 0) + 1
        w = [ref4[t] - 4 * a[t] for t in range(3)]
        bu = [b[t] - a[t] for t in range(3)]
        cv = [c[t] - a[t] for t in range(3)]
        sixfold += abs(_det3(bu, cv, w))
    # closed, consistently oriented surface: each directed edge once, with its reverse
    for (p, q), count in edges.items():
        if count != 1 or edges.get((q, p)) != 1:
            raise HullVerificationError("facets do not form a closed surface")
    return Fraction(sixfold, 24)


def hull_volume(points: np.ndarray) -> Fraction:
    """Exact volume of conv(points) for integer points that span their ambient space."""
    pts = np.asarray(points, dtype=np.int64)
    if pts.ndim != 2 or pts.shape[0] == 0:
        raise ValueError("need a nonempty 2-d point array")
    dim = pts.shape[1]
    if dim not in (1, 2, 3):
        raise ValueError("exact hull volume is implemented for dimension 1, 2, 3")
    if affine_dimension(pts) < dim:
        return Fraction(0)
    if dim == 1:
        return _volume_1d(pts)
    if dim == 2:
        return _volume_2d(pts)
    return _volume_3d(pts)

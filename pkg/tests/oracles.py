"""Independent reference computations used to check the library.

Nothing here imports the algorithms under test: areas and distances go
through shapely, symmetries through exhaustive vertex assignment, enclosing
circles through exhaustive pair/triple enumeration.
"""
from __future__ import annotations

import itertools

import numpy as np
import shapely
from shapely.geometry import Polygon


def poly(K) -> Polygon:
    return Polygon(K.vertices)


def area(K) -> float:
    return poly(K).area


def intersection_area(A, B) -> float:
    return poly(A).intersection(poly(B)).area


def symdiff_area(A, B) -> float:
    return poly(A).symmetric_difference(poly(B)).area


def centroid(K) -> np.ndarray:
    c = poly(K).centroid
    return np.array([c.x, c.y])


def _boundary_samples(K, count: int) -> np.ndarray:
    ring = poly(K).exterior
    ts = np.linspace(0.0, ring.length, count, endpoint=False)
    pts = shapely.line_interpolate_point(ring, ts)
    return np.array([[p.x, p.y] for p in pts])


def dense_hausdorff(A, B, count: int = 10_000) -> float:
    """Max over dense boundary samples of the distance to the other polygon."""
    pa, pb = poly(A), poly(B)
    sa = shapely.points(_boundary_samples(A, count))
    sb = shapely.points(_boundary_samples(B, count))
    return float(max(shapely.distance(pb, sa).max(), shapely.distance(pa, sb).max()))


def brute_force_symmetries(K, tol: float = 1e-6):
    """All affine maps permuting the vertex set of a planar polygon.

    An affine map of the plane is fixed by the images of three affinely
    independent points, so every ordered triple of distinct vertices is tried
    as the image of the first three vertices.
    """
    V = np.array(K.vertices, dtype=float)
    src = np.hstack([V[:3], np.ones((3, 1))])
    diam = max(np.linalg.norm(a - b) for a, b in itertools.combinations(V, 2))
    maps = []
    for triple in itertools.permutations(range(len(V)), 3):
        X = np.linalg.solve(src, V[list(triple)])
        lin, t = X[:2].T, X[2]
        img = V @ lin.T + t
        d = np.linalg.norm(img[:, None, :] - V[None, :, :], axis=-1)
        if d.min(axis=1).max() <= tol * diam and len(set(d.argmin(axis=1))) == len(V):
            maps.append((lin, t))
    return maps


def _circle(points):
    if len(points) == 2:
        a, b = points
        return 0.5 * (a + b), 0.5 * np.linalg.norm(a - b)
    a, b, c = points
    M = 2.0 * np.array([b - a, c - a])
    if abs(np.linalg.det(M)) < 1e-14:
        return None
    center = np.linalg.solve(M, [b @ b - a @ a, c @ c - a @ a])
    return center, np.linalg.norm(center - a)


def minimal_disk(points) -> tuple[np.ndarray, float]:
    """Smallest enclosing circle by trying every pair and triple."""
    P = np.asarray(points, dtype=float)
    best = None
    for k in (2, 3):
        for combo in itertools.combinations(P, k):
            circ = _circle(combo)
            if circ is None:
                continue
            c, r = circ
            if np.linalg.norm(P - c, axis=1).max() <= r * (1 + 1e-12) and (best is None or r < best[1]):
                best = (c, r)
    return best


EQUILATERAL = np.array([[0.0, 0.0], [1.0, 0.0], [0.5, np.sqrt(3) / 2]])


def triangle_loewner_center(T) -> np.ndarray:
    """Move the triangle onto an equilateral one, take its minimal disk, map back."""
    V = np.asarray(T, dtype=float)
    src = np.hstack([V, np.ones((3, 1))])
    X = np.linalg.solve(src, EQUILATERAL)       # V -> EQUILATERAL
    lin, t = X[:2].T, X[2]
    c, _ = minimal_disk(EQUILATERAL)
    return np.linalg.solve(lin, c - t)

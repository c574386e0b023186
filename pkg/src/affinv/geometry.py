"""Convex polytopes, affine maps, and the metric/volume primitives built on them.

Bodies are stored in canonical vertex form so that equality of bodies is a
plain comparison of vertex tuples. In the plane the canonical order is
counter-clockwise starting at the lexicographically smallest vertex; in higher
dimensions vertices are sorted lexicographically.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    DegenerateBody,
    DimMismatch,
    SingularMap,
    TooFewPoints,
    UnsupportedDimension,
    ValidationError,
)

FUSE_TOL = 1e-9          # relative to diameter
COLLINEAR_TOL = 1e-12    # relative to diameter**2
SINGULAR_TOL = 1e-12     # |det| relative to ||sigma||**n


@dataclass(frozen=True)
class ConvexBody:
    """Full-dimensional convex polytope given by its extreme points.

    Build instances with :func:`canonicalize`; the constructor only checks
    shapes and finiteness.
    """

    dim: int
    vertices: tuple

    def __post_init__(self):
        if self.dim < 1:
            raise ValidationError("dimension must be positive")
        verts = tuple(tuple(float(c) for c in v) for v in self.vertices)
        if any(len(v) != self.dim for v in verts):
            raise DimMismatch("vertex of wrong dimension")
        if not all(math.isfinite(c) for v in verts for c in v):
            raise ValidationError("non-finite vertex coordinate")
        if len(verts) < self.dim + 1:
            raise TooFewPoints(f"need at least {self.dim + 1} vertices")
        object.__setattr__(self, "vertices", verts)

    @cached_property
    def array(self) -> np.ndarray:
        arr = np.array(self.vertices, dtype=float)
        arr.setflags(write=False)
        return arr

    @cached_property
    def diameter(self) -> float:
        v = self.array
        diff = v[:, None, :] - v[None, :, :]
        return float(np.sqrt((diff ** 2).sum(-1)).max())

    def __len__(self):
        return len(self.vertices)

    def to_dict(self) -> dict:
        return {"dim": self.dim, "vertices": [list(v) for v in self.vertices]}

    @classmethod
    def from_dict(cls, data: dict) -> "ConvexBody":
        return canonicalize(data["vertices"], int(data["dim"]))


class AffineMap:
    """Invertible affine map ``x -> translation + linear @ x``."""

    __slots__ = ("linear", "translation")

    def __init__(self, linear, translation=None):
        lin = np.array(linear, dtype=float)
        if lin.ndim != 2 or lin.shape[0] != lin.shape[1]:
            raise DimMismatch("linear part must be square")
        n = lin.shape[0]
        t = np.zeros(n) if translation is None else np.array(translation, dtype=float).reshape(-1)
        if t.shape != (n,):
            raise DimMismatch("translation has wrong length")
        if not (np.isfinite(lin).all() and np.isfinite(t).all()):
            raise ValidationError("non-finite affine map entries")
        if is_singular(lin):
            raise SingularMap(f"near-singular linear part (det={np.linalg.det(lin):.3e})")
        lin.setflags(write=False)
        t.setflags(write=False)
        self.linear = lin
        self.translation = t

    @property
    def dim(self) -> int:
        return self.linear.shape[0]

    @property
    def det(self) -> float:
        return float(np.linalg.det(self.linear))

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return x @ self.linear.T + self.translation

    def __matmul__(self, other: "AffineMap") -> "AffineMap":
        return compose(self, other)

    def __repr__(self):
        return f"AffineMap(linear={self.linear.tolist()}, translation={self.translation.tolist()})"

    def flat(self) -> tuple:
        return tuple(self.linear.ravel()) + tuple(self.translation)

    def to_dict(self) -> dict:
        return {"linear": self.linear.tolist(), "translation": self.translation.tolist()}

    @classmethod
    def from_dict(cls, data: dict) -> "AffineMap":
        return cls(data["linear"], data["translation"])

    @classmethod
    def identity(cls, dim: int) -> "AffineMap":
        return cls(np.eye(dim), np.zeros(dim))

    @classmethod
    def translation_by(cls, t) -> "AffineMap":
        t = np.asarray(t, dtype=float)
        return cls(np.eye(len(t)), t)


def is_singular(linear: np.ndarray) -> bool:
    n = linear.shape[0]
    norm = np.linalg.norm(linear, 2)
    if norm == 0.0:
        return True
    return abs(np.linalg.det(linear)) < SINGULAR_TOL * norm ** n


def compose(h: AffineMap, g: AffineMap) -> AffineMap:
    """Return ``h o g``."""
    if h.dim != g.dim:
        raise DimMismatch("cannot compose maps of different dimension")
    return AffineMap(h.linear @ g.linear, h.linear @ g.translation + h.translation)


def invert(g: AffineMap) -> AffineMap:
    if is_singular(g.linear):
        raise SingularMap("cannot invert near-singular map")
    inv = np.linalg.inv(g.linear)
    return AffineMap(inv, -inv @ g.translation)


def maps_close(g: AffineMap, h: AffineMap, tol: float) -> bool:
    return bool(np.abs(np.array(g.flat()) - np.array(h.flat())).max() <= tol)


def _cross(o, a, b) -> float:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _fuse(points: list, tol: float) -> list:
    kept: list = []
    tol2 = tol * tol
    for p in points:
        for q in kept:
            if sum((a - b) ** 2 for a, b in zip(p, q)) <= tol2:
                break
        else:
            kept.append(p)
    return kept


def _hull_2d(points: list, ctol: float) -> list:
    lower: list = []
    for p in points:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= ctol:
            lower.pop()
        lower.append(p)
    upper: list = []
    for p in reversed(points):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= ctol:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def canonicalize(points: Iterable[Sequence[float]], dim: int | None = None) -> ConvexBody:
    """Convex hull of ``points`` in canonical vertex form."""
    pts = [tuple(float(c) for c in p) for p in points]
    if not pts:
        raise TooFewPoints("no points given")
    if dim is None:
        dim = len(pts[0])
    if any(len(p) != dim for p in pts):
        raise DimMismatch("points of mixed dimension")
    if not all(math.isfinite(c) for p in pts for c in p):
        raise ValidationError("non-finite coordinate")
    if len(pts) < dim + 1:
        raise TooFewPoints(f"need at least {dim + 1} points, got {len(pts)}")

    pts.sort()
    arr = np.array(pts)
    scale = float(np.linalg.norm(arr.max(0) - arr.min(0)))
    if scale == 0.0:
        raise DegenerateBody("all points coincide")
    pts = _fuse(pts, FUSE_TOL * scale)

    if dim == 1:
        return ConvexBody(1, (pts[0], pts[-1]))
    if dim == 2:
        if len(pts) < 3:
            raise DegenerateBody("fewer than three distinct points")
        hull = _hull_2d(pts, COLLINEAR_TOL * scale * scale)
        if len(hull) < 3:
            raise DegenerateBody("points are collinear")
        return ConvexBody(2, tuple(hull))

    arr = np.array(pts)
    centered = arr - arr.mean(0)
    sv = np.linalg.svd(centered, compute_uv=False)
    if len(sv) < dim or sv[dim - 1] <= 1e-9 * sv[0]:
        raise DegenerateBody("points do not span the ambient space")
    from scipy.spatial import ConvexHull

    hull = ConvexHull(arr)
    verts = sorted(pts[i] for i in set(hull.vertices.tolist()))
    return ConvexBody(dim, tuple(verts))


def apply_affine(g: AffineMap, K: ConvexBody) -> ConvexBody:
    if g.dim != K.dim:
        raise DimMismatch("map and body dimensions differ")
    return canonicalize(g(K.array).tolist(), K.dim)


def _check_same_dim(A: ConvexBody, B: ConvexBody):
    if A.dim != B.dim:
        raise DimMismatch(f"dimensions differ: {A.dim} vs {B.dim}")


def _require_planar(*bodies: ConvexBody):
    for b in bodies:
        if b.dim != 2:
            raise UnsupportedDimension("operation is implemented for n = 2 only")


def _segment_distance(p, a, b) -> float:
    dx, dy = b[0] - a[0], b[1] - a[1]
    L2 = dx * dx + dy * dy
    t = ((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / L2
    t = min(1.0, max(0.0, t))
    return math.hypot(p[0] - a[0] - t * dx, p[1] - a[1] - t * dy)


def point_distance(K: ConvexBody, x) -> float:
    """Euclidean distance from ``x`` to the body (zero inside)."""
    x = tuple(float(c) for c in x)
    if len(x) != K.dim:
        raise DimMismatch("point and body dimensions differ")
    if facet_clearance(K, x) >= 0.0:
        return 0.0
    if K.dim == 2:
        v = K.vertices
        return min(_segment_distance(x, v[i - 1], v[i]) for i in range(len(v)))
    return _project_to_hull_distance(K.array, np.array(x))


def _project_to_hull_distance(V: np.ndarray, x: np.ndarray) -> float:
    from scipy.optimize import minimize

    m = len(V)
    res = minimize(
        lambda w: float(((w @ V - x) ** 2).sum()),
        np.full(m, 1.0 / m),
        jac=lambda w: 2.0 * V @ (w @ V - x),
        bounds=[(0.0, 1.0)] * m,
        constraints=[{"type": "eq", "fun": lambda w: w.sum() - 1.0, "jac": lambda w: np.ones(m)}],
        method="SLSQP",
        options={"ftol": 1e-16, "maxiter": 500},
    )
    return float(np.linalg.norm(res.x @ V - x))


def directed_hausdorff(A: ConvexBody, B: ConvexBody) -> float:
    """sup over a in A of d(a, B); attained at a vertex of A."""
    _check_same_dim(A, B)
    return max(point_distance(B, a) for a in A.vertices)


def hausdorff_distance(A: ConvexBody, B: ConvexBody) -> float:
    _check_same_dim(A, B)
    return max(directed_hausdorff(A, B), directed_hausdorff(B, A))


def polygon_area(verts: Sequence[Sequence[float]]) -> float:
    """Signed shoelace area."""
    s = 0.0
    n = len(verts)
    for i in range(n):
        x0, y0 = verts[i - 1]
        x1, y1 = verts[i]
        s += x0 * y1 - x1 * y0
    return 0.5 * s


def volume(K: ConvexBody) -> float:
    if K.dim == 2:
        return polygon_area(K.vertices)
    if K.dim == 3:
        from scipy.spatial import ConvexHull

        return float(ConvexHull(K.array).volume)
    raise UnsupportedDimension("volume is available for n = 2 and n = 3")


def clip_polygon(subject: list, clip: Sequence) -> list:
    """Sutherland-Hodgman: clip ``subject`` by the CCW convex polygon ``clip``."""
    out = list(subject)
    cx0, cy0 = clip[-1]
    for cx1, cy1 in clip:
        if not out:
            return out
        ex, ey = cx1 - cx0, cy1 - cy0
        inp = out
        out = []
        sx, sy = inp[-1]
        s_side = ex * (sy - cy0) - ey * (sx - cx0)
        for px, py in inp:
            p_side = ex * (py - cy0) - ey * (px - cx0)
            if p_side >= 0.0:
                if s_side < 0.0:
                    t = s_side / (s_side - p_side)
                    out.append((sx + t * (px - sx), sy + t * (py - sy)))
                out.append((px, py))
            elif s_side >= 0.0:
                t = s_side / (s_side - p_side)
                out.append((sx + t * (px - sx), sy + t * (py - sy)))
            sx, sy, s_side = px, py, p_side
        cx0, cy0 = cx1, cy1
    return out


def intersection_area(A: ConvexBody, B: ConvexBody) -> float:
    _require_planar(A, B)
    return abs(polygon_area(clip_polygon(list(A.vertices), B.vertices)))


def intersect_convex(A: ConvexBody, B: ConvexBody) -> ConvexBody | None:
    """Intersection polygon, or ``None`` when it has zero area."""
    _require_planar(A, B)
    _check_same_dim(A, B)
    pts = clip_polygon(list(A.vertices), B.vertices)
    scale = max(A.diameter, B.diameter)
    if len(pts) < 3 or abs(polygon_area(pts)) <= 1e-14 * scale * scale:
        return None
    try:
        return canonicalize(pts, 2)
    except DegenerateBody:
        return None


def symmetric_difference_volume(A: ConvexBody, B: ConvexBody) -> float:
    _require_planar(A, B)
    return max(0.0, volume(A) + volume(B) - 2.0 * intersection_area(A, B))


def _facets(K: ConvexBody):
    """Unit inward normals ``a`` and offsets ``b``: points satisfy a.x >= b."""
    if K.dim == 2:
        v = K.array
        e = np.roll(v, -1, axis=0) - v
        normals = np.stack([-e[:, 1], e[:, 0]], axis=1)
        normals /= np.linalg.norm(normals, axis=1, keepdims=True)
        return normals, (normals * v).sum(1)
    from scipy.spatial import ConvexHull

    eq = ConvexHull(K.array).equations
    return -eq[:, :-1], eq[:, -1]


def facet_clearance(K: ConvexBody, x) -> float:
    """Signed distance from ``x`` to the nearest facet, positive inside."""
    a, b = _facets(K)
    x = np.asarray(x, dtype=float)
    if x.shape != (K.dim,):
        raise DimMismatch("point and body dimensions differ")
    return float((a @ x - b).min())


def contains_point(K: ConvexBody, x, margin: float = 0.0) -> bool:
    if margin < 0:
        raise ValidationError("margin must be non-negative")
    return facet_clearance(K, x) >= margin


def relative_depth(K: ConvexBody, x) -> float:
    """Smallest ratio (distance of x to a facet) / (width of K normal to it).

    Ratios of distances to a fixed hyperplane survive affine maps, so this is
    an affine-invariant interiority measure: positive iff x is interior.
    """
    a, b = _facets(K)
    x = np.asarray(x, dtype=float)
    width = (K.array @ a.T - b).max(0)
    return float(((a @ x - b) / width).min())

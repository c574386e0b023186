"""Built-in affine invariant points and the inclusion check P(K) in F(K)."""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .ellipsoid import DEFAULT_EPS, loewner_ellipsoid
from .errors import UnknownId, UnsupportedDimension
from .geometry import ConvexBody
from .symmetry import DEFAULT_TOL_FIX, affine_symmetry_group, fixed_point_set, project_onto


class BaseInvariantPointId(str, Enum):
    CENTROID = "centroid"
    LOEWNER_CENTER = "loewner_center"

    @classmethod
    def parse(cls, value) -> "BaseInvariantPointId":
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower().replace("-", "_")
        try:
            return cls(key)
        except ValueError:
            raise UnknownId(f"unknown base invariant point {value!r}") from None


def centroid(K: ConvexBody) -> np.ndarray:
    """Area centroid via a triangle fan from the first canonical vertex."""
    if K.dim != 2:
        raise UnsupportedDimension("centroid is implemented for n = 2")
    v = K.vertices
    x0, y0 = v[0]
    area = cx = cy = 0.0
    for i in range(1, len(v) - 1):
        (x1, y1), (x2, y2) = v[i], v[i + 1]
        a = 0.5 * ((x1 - x0) * (y2 - y0) - (x2 - x0) * (y1 - y0))
        area += a
        cx += a * (x0 + x1 + x2)
        cy += a * (y0 + y1 + y2)
    return np.array([cx / (3.0 * area), cy / (3.0 * area)])


def loewner_center(K: ConvexBody, eps: float = DEFAULT_EPS) -> np.ndarray:
    return loewner_ellipsoid(K, eps).center


def evaluate_base(id, K: ConvexBody) -> np.ndarray:
    pid = BaseInvariantPointId.parse(id)
    if pid is BaseInvariantPointId.CENTROID:
        return centroid(K)
    return loewner_center(K)


@dataclass(frozen=True)
class InclusionReport:
    point: tuple
    distance: float
    passed: bool

    def to_dict(self) -> dict:
        return {"point": list(self.point), "distance": self.distance, "pass": self.passed}


def check_inclusion(id, K: ConvexBody, tol_fix: float = DEFAULT_TOL_FIX, group=None) -> InclusionReport:
    """Distance from p(K) to the fixed set of K's affine stabilizer."""
    p = evaluate_base(id, K)
    G = group if group is not None else affine_symmetry_group(K)
    dist = float(np.linalg.norm(p - project_onto(fixed_point_set(G), p)))
    return InclusionReport(tuple(p.tolist()), dist, dist <= tol_fix * K.diameter)

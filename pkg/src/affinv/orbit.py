"""Affine-invariant alignment of a body against the orbit of a reference body.

The objective ``J_A(g) = vol(gK symdiff A) / vol(A)`` satisfies
``J_{hA}(h g) = J_A(g)`` for every affine ``h``, so its minimum over ``g`` is
an orbit invariant. Its sublevel sets play the role of invariant
neighbourhoods of the orbit, the minimizer ``g* K`` is the retraction onto
the orbit, and a linear ramp in the minimum is the invariant bump function.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.optimize import minimize

from .ellipsoid import loewner_ellipsoid, normalizer
from .errors import AffinvError, NonConvergence, OutsideNeighborhood, UnsupportedDimension, ValidationError
from .geometry import (
    AffineMap,
    ConvexBody,
    apply_affine,
    clip_polygon,
    compose,
    invert,
    polygon_area,
    symmetric_difference_volume,
    volume,
)

log = logging.getLogger(__name__)

DELTA_INNER = 0.02
DELTA_OUTER = 0.2


@dataclass(frozen=True)
class SolverConfig:
    rotation_steps: int = 72          # orthogonal seeds at resolution 2*pi/72
    reflections: bool = True
    restarts: int = 8                 # distinct seeds refined locally
    max_iter: int = 500
    gtol: float = 1e-10
    initial_step: float = 0.01        # simplex fallback only
    xatol: float = 1e-10
    fatol: float = 1e-14
    exact_tol: float = 1e-12          # seed objective below this is accepted as-is
    seed_separation: float = 0.25
    tie_tol: float = 1e-7             # objectives this close count as one minimum
    cluster_tol: float = 1e-3         # relative to diam(A): tied images closer than this coincide
    regularization: float = 1e-3      # weight of the ellipsoid-mismatch tie-breaker
    max_objective: float | None = None


DEFAULT_CONFIG = SolverConfig()


@dataclass(frozen=True)
class BumpParams:
    inner: float = DELTA_INNER
    outer: float = DELTA_OUTER

    def __post_init__(self):
        if not (math.isfinite(self.inner) and math.isfinite(self.outer)):
            raise ValidationError("bump thresholds must be finite")
        if not (0.0 < self.inner < self.outer):
            raise ValidationError("bump thresholds need 0 < inner < outer")

    def to_dict(self) -> dict:
        return {"inner": self.inner, "outer": self.outer}

    @classmethod
    def from_dict(cls, data: dict) -> "BumpParams":
        return cls(float(data["inner"]), float(data["outer"]))


@dataclass(frozen=True, eq=False)
class AlignmentResult:
    best_map: AffineMap
    objective: float
    retracted_body: ConvexBody
    restarts_used: int
    converged: bool
    restart_objectives: tuple = field(default=())
    tied_maps: tuple = field(default=())

    def orbit_point(self, x) -> np.ndarray:
        """Image of x under the minimizer, averaged over distinct tied minimizers.

        Maps that differ by a symmetry of K give the same image of a fixed x,
        so only genuinely different nearest orbit members contribute.
        """
        maps = self.tied_maps or (self.best_map,)
        pts = np.array([g(x) for g in maps])
        return pts[0] if len(pts) == 1 else pts.mean(axis=0)

    def to_dict(self) -> dict:
        return {
            "objective": self.objective,
            "best_map": self.best_map.to_dict(),
            "converged": self.converged,
            "restarts_used": self.restarts_used,
        }


def alignment_objective(g: AffineMap, K: ConvexBody, A: ConvexBody) -> float:
    """Normalized symmetric-difference volume between gK and A."""
    if K.dim != 2 or A.dim != 2:
        raise UnsupportedDimension("alignment is implemented for n = 2")
    return symmetric_difference_volume(apply_affine(g, K), A) / volume(A)


@lru_cache(maxsize=256)
def _frame(K: ConvexBody):
    """Loewner normalizer of K, its inverse, and the normalized vertex list."""
    T = normalizer(loewner_ellipsoid(K))
    verts = [tuple(v) for v in T(K.array).tolist()]
    return T, invert(T), verts, polygon_area(verts)


def _objective(p, Kv, k_area, Av, a_area) -> float:
    a, b, c, d, e, f = p
    det = a * d - b * c
    pts = [(a * x + b * y + e, c * x + d * y + f) for x, y in Kv]
    if det < 0:
        pts.reverse()
    inter = abs(polygon_area(clip_polygon(pts, Av)))
    return (abs(det) * k_area + a_area - 2.0 * inter) / a_area


def _clip_segment(p0, p1, poly):
    """Parameter interval of segment p0->p1 inside the CCW convex polygon."""
    t0, t1 = 0.0, 1.0
    dx, dy = p1[0] - p0[0], p1[1] - p0[1]
    cx0, cy0 = poly[-1]
    for cx1, cy1 in poly:
        ex, ey = cx1 - cx0, cy1 - cy0
        num = ex * (p0[1] - cy0) - ey * (p0[0] - cx0)   # >= 0 inside
        den = ex * dy - ey * dx
        if den == 0.0:
            if num < 0.0:
                return None
        else:
            t = -num / den
            if den > 0.0:
                t0 = max(t0, t)
            else:
                t1 = min(t1, t)
            if t0 >= t1:
                return None
        cx0, cy0 = cx1, cy1
    return t0, t1


def _objective_grad(p, Kv, k_area, Av, a_area):
    """Objective and its exact gradient in the six map parameters.

    Moving a boundary piece of gK that lies inside A changes the overlap area
    by (piece length) * (normal velocity at its midpoint); the velocity is
    affine along the piece, so the midpoint rule is exact.
    """
    a, b, c, d, e, f = p
    det = a * d - b * c
    sgn = 1.0 if det >= 0 else -1.0
    src = list(Kv)
    if det < 0:
        src.reverse()
    pts = [(a * x + b * y + e, c * x + d * y + f) for x, y in src]
    inter = abs(polygon_area(clip_polygon(pts, Av)))
    J = (abs(det) * k_area + a_area - 2.0 * inter) / a_area

    ga = gb = gc = gd = ge = gf = 0.0
    m = len(pts)
    for i in range(m):
        (x0, y0), (x1, y1) = pts[i], pts[(i + 1) % m]
        span = _clip_segment((x0, y0), (x1, y1), Av)
        if span is None:
            continue
        t0, t1 = span
        dx, dy = x1 - x0, y1 - y0
        seg = math.hypot(dx, dy)
        if seg == 0.0:
            continue
        L = (t1 - t0) * seg
        nx, ny = dy / seg, -dx / seg
        tm = 0.5 * (t0 + t1)
        (kx0, ky0), (kx1, ky1) = src[i], src[(i + 1) % m]
        kx, ky = kx0 + tm * (kx1 - kx0), ky0 + tm * (ky1 - ky0)
        ga += L * nx * kx
        gb += L * nx * ky
        gc += L * ny * kx
        gd += L * ny * ky
        ge += L * nx
        gf += L * ny
    s = sgn * k_area
    grad = np.array([s * d - 2.0 * ga, -s * c - 2.0 * gb, -s * b - 2.0 * gc,
                     s * a - 2.0 * gd, -2.0 * ge, -2.0 * gf]) / a_area
    return J, grad


def _penalty(p):
    """Mismatch between g E_K and E_A for the Loewner ellipsoids, in A's normalized frame.

    Zero exactly when the normalized map is orthogonal, i.e. on true alignments
    of orbit members; invariant under the orthogonal freedom of the frames. It
    only selects a point when the area objective is flat along a valley.
    """
    a, b, c, d, e, f = p
    p00 = a * a + b * b - 1.0
    p01 = a * c + b * d
    p11 = c * c + d * d - 1.0
    R = p00 * p00 + 2.0 * p01 * p01 + p11 * p11 + e * e + f * f
    grad = np.array([
        4.0 * (p00 * a + p01 * c), 4.0 * (p00 * b + p01 * d),
        4.0 * (p01 * a + p11 * c), 4.0 * (p01 * b + p11 * d),
        2.0 * e, 2.0 * f,
    ])
    return R, grad


def _params(lin: np.ndarray, t: np.ndarray) -> tuple:
    return (lin[0, 0], lin[0, 1], lin[1, 0], lin[1, 1], t[0], t[1])


def _orthogonal_seeds(cfg: SolverConfig):
    seeds = []
    for i in range(cfg.rotation_steps):
        th = 2.0 * math.pi * i / cfg.rotation_steps
        c, s = math.cos(th), math.sin(th)
        seeds.append((c, -s, s, c, 0.0, 0.0))
        if cfg.reflections:
            seeds.append((c, s, s, -c, 0.0, 0.0))
    return seeds


def _matching_seeds(Kv, Av):
    """Affine fits for every cyclic vertex correspondence (both orientations)."""
    m = len(Kv)
    if m != len(Av):
        return []
    src = np.hstack([np.array(Kv), np.ones((m, 1))])
    tgt = np.array(Av)
    pinv = np.linalg.pinv(src)
    idx = np.arange(m)
    seeds = []
    for orient in (1, -1):
        for shift in range(m):
            X = pinv @ tgt[(orient * idx + shift) % m]
            seeds.append(_params(X[:2].T, X[2]))
    return seeds


def _image(p, Kv) -> np.ndarray:
    a, b, c, d, e, f = p
    return np.array([(a * x + b * y + e, c * x + d * y + f) for x, y in Kv])


def _select_distinct(scored, count, separation, Kv):
    """Best seeds whose image bodies differ; seeds related by a symmetry of K coincide."""
    chosen, images = [], []
    for val, p in scored:
        img = _image(p, Kv)
        if all(not _same_set(img, other, separation) for other in images):
            chosen.append((val, p))
            images.append(img)
            if len(chosen) == count:
                break
    return chosen


def _refine(p0, fun, fun_grad, cfg: SolverConfig):
    """BFGS on the exact gradient.

    Minima of the area objective usually sit on a kink, where the line search
    stops with precision loss; that is accepted as converged. Simplex descent
    only takes over when BFGS runs out of iterations or fails otherwise.
    """
    p0 = np.array(p0, dtype=float)
    res = minimize(fun_grad, p0, jac=True, method="BFGS",
                   options={"gtol": cfg.gtol, "maxiter": cfg.max_iter})
    best_p, best_f = res.x, float(res.fun)
    converged = bool(res.success) or (res.status == 2 and res.nit > 0)
    if not converged:
        simplex = np.vstack([best_p, best_p + cfg.initial_step * np.eye(6)])
        nm = minimize(fun, best_p, method="Nelder-Mead",
                      options={"maxiter": cfg.max_iter, "xatol": cfg.xatol,
                               "fatol": cfg.fatol, "initial_simplex": simplex})
        if nm.fun < best_f:
            best_p, best_f = nm.x, float(nm.fun)
        converged = bool(nm.success)
    return best_p, best_f, converged


def orbit_distance(A: ConvexBody, K: ConvexBody, cfg: SolverConfig = DEFAULT_CONFIG) -> AlignmentResult:
    """Approximately minimize J_A(g) over the affine group."""
    if K.dim != 2 or A.dim != 2:
        raise UnsupportedDimension("orbit distance is implemented for n = 2")
    TK, _, Kv, k_area = _frame(K)
    _, TA_inv, Av, a_area = _frame(A)

    mu = cfg.regularization

    def area_term(p):
        return _objective(p.tolist() if isinstance(p, np.ndarray) else p, Kv, k_area, Av, a_area)

    def fun(p):
        p = p.tolist() if isinstance(p, np.ndarray) else p
        return _objective(p, Kv, k_area, Av, a_area) + mu * _penalty(p)[0]

    def fun_grad(p):
        p = p.tolist()
        J, gJ = _objective_grad(p, Kv, k_area, Av, a_area)
        R, gR = _penalty(p)
        return J + mu * R, gJ + mu * gR

    seeds = _matching_seeds(Kv, Av) + _orthogonal_seeds(cfg)
    scored = sorted(((fun(p), p) for p in seeds), key=lambda vp: (vp[0], vp[1]))

    if area_term(scored[0][1]) <= cfg.exact_tol:
        results = [(np.array(scored[0][1]), scored[0][0], True)]
    else:
        results = [_refine(p, fun, fun_grad, cfg) for _, p in
                   _select_distinct(scored, cfg.restarts, cfg.seed_separation, Kv)]

    # ties (within tie_tol) are resolved by the lexicographically smallest map
    floor = min(r[1] for r in results)
    tied = sorted(((_to_map(r[0], TK, TA_inv), r) for r in results if r[1] <= floor + cfg.tie_tol),
                  key=lambda gr: (gr[0].flat()))
    best = tied[0][1]
    g = tied[0][0]
    retracted = apply_affine(g, K)
    by_value = sorted(tied, key=lambda gr: gr[1][1])
    distinct = _distinct_members([gm for gm, _ in by_value], K, cfg.cluster_tol * A.diameter)
    objective = max(0.0, area_term(best[0]))
    if cfg.max_objective is not None and objective > cfg.max_objective:
        raise NonConvergence(f"best alignment objective {objective:.3e} exceeds {cfg.max_objective:.3e}")
    return AlignmentResult(g, objective, retracted, len(results), best[2],
                           tuple(area_term(r[0]) for r in results), tuple(distinct))


def _distinct_members(maps, K: ConvexBody, tol: float):
    """Keep the first map of each cluster of (nearly) equal image bodies gK."""
    kept, bodies = [], []
    for g in maps:
        img = g(K.array)
        # images differing by a symmetry of K only permute rows
        if any(_same_set(b, img, tol) for b in bodies):
            continue
        kept.append(g)
        bodies.append(img)
    return kept


def _same_set(a: np.ndarray, b: np.ndarray, tol: float) -> bool:
    d = np.sqrt(((a[:, None, :] - b[None, :, :]) ** 2).sum(-1))
    return bool((d.min(1) <= tol).all() and (d.min(0) <= tol).all())


def _to_map(p, TK: AffineMap, TA_inv: AffineMap) -> AffineMap:
    a, b, c, d, e, f = (float(v) for v in p)
    N = AffineMap([[a, b], [c, d]], [e, f])
    return compose(TA_inv, compose(N, TK))


def retract(A: ConvexBody, K: ConvexBody, cfg: SolverConfig = DEFAULT_CONFIG,
            outer: float = DELTA_OUTER) -> AlignmentResult:
    """Nearest orbit member ``g* K``; ``g*`` is unique only up to ``G_K`` on the right."""
    res = orbit_distance(A, K, cfg)
    if res.objective >= outer:
        raise OutsideNeighborhood(
            f"orbit distance {res.objective:.4g} is not below the outer level {outer:.4g}")
    return res


def ramp(D: float, params: BumpParams) -> float:
    return min(1.0, max(0.0, (params.outer - D) / (params.outer - params.inner)))


def bump(A: ConvexBody, K: ConvexBody, params: BumpParams = BumpParams(),
         cfg: SolverConfig = DEFAULT_CONFIG) -> float:
    try:
        D = orbit_distance(A, K, cfg).objective
    except AffinvError as exc:
        log.warning("orbit distance failed (%s); bump degrades to 0", exc)
        return 0.0
    return ramp(D, params)

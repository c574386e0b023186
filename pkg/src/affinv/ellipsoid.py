"""Minimum-volume enclosing (Loewner) ellipsoid of a polytope."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NonConvergence, ValidationError
from .geometry import AffineMap, ConvexBody

DEFAULT_EPS = 1e-7
MAX_ITER = 10**6


@dataclass(frozen=True, eq=False)
class Ellipsoid:
    """``{x : (x - center)^T shape (x - center) <= 1}``."""

    center: np.ndarray
    shape: np.ndarray
    gap: float = 0.0
    iterations: int = 0

    def __post_init__(self):
        c = np.array(self.center, dtype=float)
        M = np.array(self.shape, dtype=float)
        if not np.allclose(M, M.T, atol=1e-12 * max(1.0, np.abs(M).max())):
            raise ValidationError("shape matrix is not symmetric")
        M = 0.5 * (M + M.T)
        if np.linalg.eigvalsh(M).min() <= 0:
            raise ValidationError("shape matrix is not positive definite")
        object.__setattr__(self, "center", c)
        object.__setattr__(self, "shape", M)

    def quadratic(self, x) -> np.ndarray:
        d = np.atleast_2d(np.asarray(x, dtype=float)) - self.center
        return np.einsum("ij,jk,ik->i", d, self.shape, d)

    def transform(self, g: AffineMap) -> "Ellipsoid":
        inv = np.linalg.inv(g.linear)
        return Ellipsoid(g(self.center), inv.T @ self.shape @ inv, self.gap, self.iterations)

    def to_dict(self) -> dict:
        return {"center": self.center.tolist(), "shape": self.shape.tolist()}


def _ellipsoid_from_weights(P: np.ndarray, u: np.ndarray):
    c = u @ P
    D = P - c
    cov = (D * u[:, None]).T @ D
    M = np.linalg.inv(cov) / P.shape[1]
    return c, M


def loewner_ellipsoid(K: ConvexBody, eps: float = DEFAULT_EPS, init_weights=None,
                      max_iter: int = MAX_ITER) -> Ellipsoid:
    """Khachiyan barycentric ascent with Todd-Yildirim away steps.

    Stops once every vertex ``u`` satisfies ``(u-c)^T M (u-c) <= 1 + eps``.
    """
    if not (0.0 < eps <= 1e-2):
        raise ValidationError("eps must lie in (0, 1e-2]")
    P = K.array
    m, n = P.shape
    d = n + 1
    Q = np.hstack([P, np.ones((m, 1))])
    if init_weights is None:
        u = np.full(m, 1.0 / m)
    else:
        u = np.asarray(init_weights, dtype=float)
        if u.shape != (m,) or (u <= 0).any():
            raise ValidationError("initial weights must be positive, one per vertex")
        u = u / u.sum()

    # lifted criterion: max_i g_i <= d + n*eps  <=>  max (u-c)^T M (u-c) <= 1 + eps
    target = d + n * eps
    for it in range(max_iter):
        X = (Q * u[:, None]).T @ Q
        g = np.einsum("ij,jk,ik->i", Q, np.linalg.inv(X), Q)
        j = int(np.argmax(g))
        if g[j] <= target:
            c, M = _ellipsoid_from_weights(P, u)
            return Ellipsoid(c, M, gap=float((g[j] - 1.0) / n - 1.0), iterations=it)
        support = np.flatnonzero(u > 0)
        k = int(support[np.argmin(g[support])])
        up = g[j] / d - 1.0
        down = 1.0 - g[k] / d
        if up >= down:
            beta = (g[j] - d) / (d * (g[j] - 1.0))
            u *= 1.0 - beta
            u[j] += beta
        else:
            beta = min(down / (g[k] - 1.0), u[k] / (1.0 - u[k]))
            u *= 1.0 + beta
            u[k] -= beta
            if u[k] < 1e-300:
                u[k] = 0.0
    raise NonConvergence(f"Loewner ellipsoid did not converge in {max_iter} iterations")


def _sym_sqrt(M: np.ndarray) -> np.ndarray:
    w, V = np.linalg.eigh(M)
    return (V * np.sqrt(w)) @ V.T


def normalizer(E: Ellipsoid) -> AffineMap:
    """Affine map sending ``E`` onto the unit ball: ``x -> M^(1/2) (x - c)``."""
    S = _sym_sqrt(E.shape)
    return AffineMap(S, -S @ E.center)

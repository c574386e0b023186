"""Affine stabilizer of a polytope and its fixed-point subspace."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ellipsoid import loewner_ellipsoid, normalizer
from .errors import DimMismatch, EmptyFixedSet, ToleranceAmbiguity
from .geometry import AffineMap, ConvexBody, compose, invert, is_singular

DEFAULT_TOL_SYM = 1e-6
DEFAULT_TOL_FIX = 1e-6
GRAM_TOL = 1e-4
RANK_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class SymmetryGroup:
    """Finite group of affine maps preserving a body; identity first."""

    dim: int
    elements: tuple
    scale: float = 1.0
    permutations: tuple = ()

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def to_dict(self) -> dict:
        return {"dim": self.dim, "order": self.order,
                "elements": [g.to_dict() for g in self.elements]}


@dataclass(frozen=True, eq=False)
class AffineSubspace:
    base: np.ndarray
    directions: np.ndarray  # shape (k, n), orthonormal rows

    def __post_init__(self):
        base = np.asarray(self.base, dtype=float)
        dirs = np.asarray(self.directions, dtype=float).reshape(-1, base.shape[0])
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "directions", dirs)

    @property
    def ambient_dim(self) -> int:
        return self.base.shape[0]

    @property
    def dim(self) -> int:
        return self.directions.shape[0]

    def to_dict(self) -> dict:
        return {"base": self.base.tolist(), "directions": self.directions.tolist()}


def _perm_map(V: np.ndarray, perm) -> tuple[AffineMap, float]:
    """Least-squares affine map sending V[i] to V[perm[i]], and its max residual."""
    m, n = V.shape
    Vh = np.hstack([V, np.ones((m, 1))])
    target = V[list(perm)]
    X, *_ = np.linalg.lstsq(Vh, target, rcond=None)
    resid = float(np.abs(Vh @ X - target).max())
    lin, t = X[:n].T, X[n]
    if is_singular(lin):
        return None, np.inf
    return AffineMap(lin, t), resid


def _gram_bijections(W: np.ndarray, tol: float):
    """Vertex bijections preserving norms and pairwise inner products of W."""
    m = len(W)
    G = W @ W.T
    norms = np.sqrt(np.diag(G))
    compatible = [np.flatnonzero(np.abs(norms - norms[i]) <= tol) for i in range(m)]
    perm = [-1] * m
    used = [False] * m

    def extend(i):
        if i == m:
            yield tuple(perm)
            return
        for j in compatible[i]:
            if used[j]:
                continue
            if any(abs(G[i, k] - G[j, perm[k]]) > tol for k in range(i)):
                continue
            perm[i] = j
            used[j] = True
            yield from extend(i + 1)
            used[j] = False
        perm[i] = -1

    yield from extend(0)


def _sort_key(g: AffineMap):
    return tuple(np.round(g.flat(), 9))


def _find_member(g: AffineMap, elements, tol: float) -> int:
    flat = np.array(g.flat())
    for idx, h in enumerate(elements):
        if np.abs(flat - np.array(h.flat())).max() <= tol:
            return idx
    return -1


def affine_symmetry_group(K: ConvexBody, tol_sym: float = DEFAULT_TOL_SYM) -> SymmetryGroup:
    """All affine maps g with gK = K.

    Candidates come from vertex bijections that are isometries of the
    Loewner-normalized vertex set; each candidate is then fitted as an exact
    affine map on the original vertices and kept only if it permutes them.
    """
    T = normalizer(loewner_ellipsoid(K))
    V = K.array
    W = T(V)
    diam = K.diameter
    accepted = []
    for perm in _gram_bijections(W, GRAM_TOL):
        g, resid = _perm_map(V, perm)
        if g is not None and resid <= tol_sym * diam:
            accepted.append((g, perm))

    ident = tuple(range(len(V)))
    accepted.sort(key=lambda gp: (gp[1] != ident, _sort_key(gp[0])))
    elements = [g for g, _ in accepted]
    entry_tol = tol_sym * max(1.0, diam)
    for a in range(len(elements)):
        for b in range(a + 1, len(elements)):
            if np.abs(np.array(elements[a].flat()) - np.array(elements[b].flat())).max() <= entry_tol:
                raise ToleranceAmbiguity("two vertex bijections give indistinguishable maps; "
                                         "tol_sym is too coarse for this body")
    for g in elements:
        if _find_member(invert(g), elements, 10 * entry_tol) < 0:
            raise ToleranceAmbiguity("candidate set is not closed under inversion")
        for h in elements:
            if _find_member(compose(h, g), elements, 10 * entry_tol) < 0:
                raise ToleranceAmbiguity("candidate set is not closed under composition")
    return SymmetryGroup(K.dim, tuple(elements), diam, tuple(p for _, p in accepted))


def _canonical_sign(rows: np.ndarray) -> np.ndarray:
    out = rows.copy()
    for r in out:
        nz = np.flatnonzero(np.abs(r) > 1e-12)
        if nz.size and r[nz[0]] < 0:
            r *= -1.0
    return out


def fixed_point_set(G: SymmetryGroup, tol_fix: float = DEFAULT_TOL_FIX) -> AffineSubspace:
    """Common fixed points of all elements, via SVD of the stacked equations."""
    n = G.dim
    eye = np.eye(n)
    rows, rhs = [], []
    for g in G.elements:
        if np.abs(g.linear - eye).max() <= RANK_TOL and np.abs(g.translation).max() <= RANK_TOL * max(1.0, G.scale):
            continue
        rows.append(g.linear - eye)
        rhs.append(-g.translation)
    if not rows:
        return AffineSubspace(np.zeros(n), eye)
    A = np.vstack(rows)
    b = np.concatenate(rhs)
    U, s, Vt = np.linalg.svd(A)
    cut = RANK_TOL * np.linalg.norm(A, 2)
    r = int((s > cut).sum())
    base = Vt[:r].T @ ((U[:, :r].T @ b) / s[:r])
    if np.abs(A @ base - b).max() > tol_fix * max(1.0, G.scale):
        raise EmptyFixedSet("group elements have no common fixed point")
    return AffineSubspace(base, _canonical_sign(Vt[r:]))


def project_onto(S: AffineSubspace, x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape != S.base.shape:
        raise DimMismatch("point and subspace dimensions differ")
    D = S.directions
    return S.base + D.T @ (D @ (x - S.base))


def max_displacement(G: SymmetryGroup, x) -> tuple[float, AffineMap | None]:
    x = np.asarray(x, dtype=float)
    worst, arg = 0.0, None
    for g in G.elements:
        d = float(np.linalg.norm(g(x) - x))
        if d > worst:
            worst, arg = d, g
    return worst, arg


def is_member(G: SymmetryGroup, x, tol_fix: float = DEFAULT_TOL_FIX) -> bool:
    """Whether x is fixed by every element, up to ``tol_fix * diam(K)``."""
    return max_displacement(G, x)[0] <= tol_fix * G.scale

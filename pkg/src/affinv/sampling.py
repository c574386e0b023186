"""Seeded generators for random affine maps and bodies."""
from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateBody, ValidationError
from .geometry import AffineMap, ConvexBody, apply_affine, canonicalize, is_singular

SEED_ENV = "AFFINV_SEED"


def default_seed() -> int:
    return int(os.environ.get(SEED_ENV, "0"))


@dataclass(frozen=True)
class RandomSpec:
    seed: int = 0
    condition_cap: float = 20.0
    noise_level: float = 0.0

    def __post_init__(self):
        if self.condition_cap < 1.0:
            raise ValidationError("condition_cap must be >= 1")
        if self.noise_level < 0.0:
            raise ValidationError("noise_level must be >= 0")

    def rng(self, *stream: int) -> np.random.Generator:
        """Independent generator for substream ``stream`` (e.g. a trial index)."""
        return np.random.default_rng([self.seed & (2**64 - 1), *stream])


def _rotation(rng: np.random.Generator, n: int) -> np.ndarray:
    Q, R = np.linalg.qr(rng.standard_normal((n, n)))
    return Q * np.sign(np.diag(R))


def random_affine(rng: np.random.Generator, dim: int = 2, condition_cap: float = 20.0) -> AffineMap:
    """rotation @ diag(s) @ rotation with s in [cap^-1/2, cap^1/2], translation in [-2, 2]^n."""
    if condition_cap < 1.0:
        raise ValidationError("condition_cap must be >= 1")
    half = 0.5 * np.log(condition_cap)
    while True:
        s = np.exp(rng.uniform(-half, half, dim))
        lin = _rotation(rng, dim) @ np.diag(s) @ _rotation(rng, dim)
        if not is_singular(lin):
            return AffineMap(lin, rng.uniform(-2.0, 2.0, dim))


def perturb(rng: np.random.Generator, K: ConvexBody, noise_level: float) -> ConvexBody:
    if noise_level == 0.0:
        return K
    scale = noise_level * K.diameter
    for _ in range(100):
        pts = K.array + rng.uniform(-scale, scale, K.array.shape)
        try:
            return canonicalize(pts.tolist(), K.dim)
        except DegenerateBody:
            continue
    raise DegenerateBody("could not perturb body without degenerating it")


def random_polygon(rng: np.random.Generator) -> ConvexBody:
    for _ in range(100):
        pts = rng.uniform(0.0, 1.0, (int(rng.integers(6, 13)), 2))
        try:
            return canonicalize(pts.tolist(), 2)
        except DegenerateBody:
            continue
    raise DegenerateBody("random polygon generator kept degenerating")


def random_body(rng: np.random.Generator, base: ConvexBody | None = None, noise_level: float = 0.0,
                condition_cap: float = 20.0) -> ConvexBody:
    """Affine image of ``base`` with vertex noise, or a random polygon when no base."""
    if base is None:
        return random_polygon(rng)
    g = random_affine(rng, base.dim, condition_cap)
    return perturb(rng, apply_affine(g, base), noise_level)


def sample_from(spec: RandomSpec, *stream: int, base: ConvexBody | None = None):
    """(map, body) pair drawn deterministically from ``spec`` and a substream."""
    rng = spec.rng(*stream)
    return random_affine(rng, condition_cap=spec.condition_cap), random_body(
        rng, base, spec.noise_level, spec.condition_cap)

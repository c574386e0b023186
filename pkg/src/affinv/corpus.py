"""Named fixture bodies with their expected stabilizer order and fixed-set dimension."""
from __future__ import annotations

import math
from dataclasses import dataclass

from .geometry import ConvexBody, canonicalize


@dataclass(frozen=True)
class Fixture:
    name: str
    body: ConvexBody
    order: int
    fixed_dim: int


def regular_polygon(k: int, radius: float = 1.0, center=(0.0, 0.0)) -> ConvexBody:
    return canonicalize(
        [(center[0] + radius * math.cos(2 * math.pi * i / k),
          center[1] + radius * math.sin(2 * math.pi * i / k)) for i in range(k)], 2)


def square(half: float = 1.0) -> ConvexBody:
    return canonicalize([(-half, -half), (half, -half), (half, half), (-half, half)], 2)


UNIT_SQUARE = canonicalize([(0, 0), (1, 0), (1, 1), (0, 1)], 2)
SQUARE = square()
RIGHT_TRIANGLE = canonicalize([(0, 0), (1, 0), (0, 1)], 2)
TRAPEZOID = canonicalize([(-1, 0), (1, 0), (0.5, 1), (-0.5, 1)], 2)
ASYMMETRIC_QUAD = canonicalize([(0, 0), (3, 0), (2.5, 1), (0, 2)], 2)
ASYMMETRIC_PENTAGON = canonicalize([(0, 0), (4, 0), (5, 2), (2, 4), (-1, 1.5)], 2)


def corpus() -> list[Fixture]:
    fx = [
        Fixture("square", SQUARE, 8, 0),
        Fixture("unit_square", UNIT_SQUARE, 8, 0),
        Fixture("rectangle", canonicalize([(0, 0), (3, 0), (3, 1), (0, 1)], 2), 8, 0),
        Fixture("right_triangle", RIGHT_TRIANGLE, 6, 0),
        Fixture("scalene_triangle", canonicalize([(0, 0), (4, 0), (1, 3)], 2), 6, 0),
    ]
    fx += [Fixture(f"regular_{k}gon", regular_polygon(k), 2 * k, 0) for k in range(3, 9)]
    fx += [
        Fixture("trapezoid", TRAPEZOID, 2, 1),
        Fixture("asymmetric_quad", ASYMMETRIC_QUAD, 1, 2),
        Fixture("asymmetric_pentagon", ASYMMETRIC_PENTAGON, 1, 2),
    ]
    return fx


def get(name: str) -> Fixture:
    for f in corpus():
        if f.name == name:
            return f
    raise KeyError(name)

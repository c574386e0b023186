"""Deterministic SVG rendering of planar bodies and points."""
from __future__ import annotations

from pathlib import Path

import numpy as np

from .errors import UnsupportedDimension

CANVAS = 400.0      # pixels along the longer side
PADDING = 0.05      # fraction of the longer bounding-box side
POINT_RADIUS = 2
PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


def _fmt(v: float) -> str:
    s = f"{v:.4f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


def _bounds(bodies, points):
    coords = [np.asarray(b.array) for b in bodies]
    if len(points):
        coords.append(np.atleast_2d(np.asarray(points, dtype=float)))
    if not coords:
        return np.zeros(2), np.ones(2)
    allc = np.vstack(coords)
    return allc.min(axis=0), allc.max(axis=0)


def render_svg(bodies=(), points=()) -> str:
    """SVG text for ``bodies`` (filled polygons) and ``points`` (small circles)."""
    for b in bodies:
        if b.dim != 2:
            raise UnsupportedDimension("SVG output is planar only")
    pts = [tuple(float(c) for c in p) for p in points]
    if any(len(p) != 2 for p in pts):
        raise UnsupportedDimension("SVG output is planar only")
    lo, hi = _bounds(bodies, pts)
    side = float(max(hi - lo))
    if side <= 0.0:
        side = 1.0
    pad = PADDING * side
    lo, hi = lo - pad, hi + pad
    scale = CANVAS / float(max(hi - lo))
    width, height = (hi - lo) * scale

    def px(x, y):
        return _fmt((x - lo[0]) * scale), _fmt((hi[1] - y) * scale)

    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_fmt(width)}" height="{_fmt(height)}" '
        f'viewBox="0 0 {_fmt(width)} {_fmt(height)}">',
        f'<rect x="0" y="0" width="{_fmt(width)}" height="{_fmt(height)}" fill="white"/>',
    ]
    for i, b in enumerate(bodies):
        coords = " ".join(",".join(px(x, y)) for x, y in b.vertices)
        color = PALETTE[i % len(PALETTE)]
        lines.append(f'<polygon points="{coords}" fill="{color}" fill-opacity="0.2" '
                     f'stroke="{color}" stroke-width="1"/>')
    for x, y in pts:
        cx, cy = px(x, y)
        lines.append(f'<circle cx="{cx}" cy="{cy}" r="{POINT_RADIUS}" fill="black"/>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def emit_svg(bodies, points, path) -> Path:
    """Write :func:`render_svg` output to ``path``; OSError propagates."""
    path = Path(path)
    path.write_text(render_svg(bodies, points), encoding="utf-8")
    return path

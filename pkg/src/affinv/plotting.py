"""Matplotlib figures for bodies and verification reports."""
from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

# keep PNG bytes stable across runs
_META = {"Software": None}


def plot_bodies(bodies, points, path, title: str | None = None) -> Path:
    fig, ax = plt.subplots(figsize=(4, 4), dpi=100)
    for i, b in enumerate(bodies):
        v = np.vstack([b.array, b.array[:1]])
        ax.fill(v[:, 0], v[:, 1], alpha=0.2, color=f"C{i}")
        ax.plot(v[:, 0], v[:, 1], color=f"C{i}", lw=1)
    if len(points):
        p = np.atleast_2d(np.asarray(points, dtype=float))
        ax.scatter(p[:, 0], p[:, 1], s=12, color="k", zorder=3)
    ax.set_aspect("equal")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, metadata=_META)
    plt.close(fig)
    return Path(path)


def plot_equivariance(report, path, orbit_tol: float, overall_tol: float) -> Path:
    """Per-trial relative equivariance error on a log axis, coloured by trial kind."""
    fig, ax = plt.subplots(figsize=(6, 3.5), dpi=100)
    floor = 1e-17
    for i, kind in enumerate(("orbit", "perturbed", "far")):
        rows = [(t.index, max(t.rel_err, floor)) for t in report.trials
                if t.kind == kind and t.rel_err is not None]
        if rows:
            idx, err = zip(*rows)
            ax.scatter(idx, err, s=10, color=f"C{i}", label=kind)
    ax.axhline(orbit_tol, color="C0", ls="--", lw=0.8)
    ax.axhline(overall_tol, color="k", ls="--", lw=0.8)
    ax.set_yscale("log")
    ax.set_xlabel("trial")
    ax.set_ylabel("relative error")
    ax.legend(loc="lower right", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, metadata=_META)
    plt.close(fig)
    return Path(path)

"""SVG rendering of two-dimensional coverings.

Each set is rasterized by membership over a square grid and drawn as a
filled contour region carrying the SVG group id ``covering-set-<i>``; the
ball outline (``ball-boundary``) and centre marker (``center-marker``) are
always present, and failure witnesses can be overlaid (``failure-witnesses``).
Uses the object-oriented matplotlib API only, so no GUI backend is touched.
"""

from __future__ import annotations

import numpy as np
from matplotlib import colormaps
from matplotlib.figure import Figure

from .coverings import Covering
from .shapes import MEMBERSHIP_TOL

__all__ = ["render_covering"]


def render_covering(cov: Covering, out_path, resolution: int = 512, highlight=None) -> None:
    """Render a dim-2 covering to ``out_path`` (SVG keeps the group ids).

    ``highlight`` may be an array of points (e.g. audit failure witnesses)
    drawn as crosses on top of the sets.  Raises ValueError for coverings of
    dimension other than 2.
    """
    if cov.space.dim != 2:
        raise ValueError(f"can only render dim-2 coverings, got dim={cov.space.dim}")
    if resolution < 16:
        raise ValueError("resolution must be at least 16")
    center, radius = cov.ball.center, cov.ball.radius
    pad = 0.12 * radius
    xs = np.linspace(center[0] - radius - pad, center[0] + radius + pad, resolution)
    ys = np.linspace(center[1] - radius - pad, center[1] + radius + pad, resolution)
    X, Y = np.meshgrid(xs, ys)
    pts = np.stack([X.ravel(), Y.ravel()], axis=1)

    fig = Figure(figsize=(6.0, 6.0))
    ax = fig.add_subplot(111)
    palette = colormaps["tab10"].colors
    for i, shape in enumerate(cov.sets):
        mask = shape.contains(cov.space, pts, MEMBERSHIP_TOL).reshape(resolution, resolution)
        color = palette[i % len(palette)]
        if mask.any():
            artist = ax.contourf(
                X, Y, mask.astype(float), levels=[0.5, 1.5], colors=[color], alpha=0.45
            )
        else:
            # keep one artist (and its group id) per set even when the raster misses it
            (artist,) = ax.plot([], [], color=color)
        artist.set_gid(f"covering-set-{i}")

    norms = np.asarray(cov.space.norm(pts - center)).reshape(resolution, resolution)
    outline = ax.contour(X, Y, norms, levels=[radius], colors="black", linewidths=1.2)
    outline.set_gid("ball-boundary")

    (marker,) = ax.plot(
        [center[0]], [center[1]], marker="+", color="black",
        markersize=10.0, markeredgewidth=1.6, linestyle="none",
    )
    marker.set_gid("center-marker")

    if highlight is not None:
        hp = np.asarray(highlight, dtype=float).reshape(-1, 2)
        if hp.shape[0]:
            (crosses,) = ax.plot(
                hp[:, 0], hp[:, 1], marker="x", color="crimson",
                markersize=6.0, linestyle="none",
            )
            crosses.set_gid("failure-witnesses")

    ax.set_aspect("equal")
    ax.set_xlim(xs[0], xs[-1])
    ax.set_ylim(ys[0], ys[-1])
    kind = cov.meta.get("kind", "covering")
    ax.set_title(f"{kind}: {cov.count} sets")
    fig.savefig(out_path)

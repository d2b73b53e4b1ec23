"""Finite-dimensional l^p spaces: norms, angles, deterministic sampling, convexity probes."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "BATCH_SIZE",
    "ConvexityWitness",
    "Space",
    "angle",
    "as_point",
    "batch_rng",
    "inner",
    "iter_batches",
    "ncs_violation_search",
    "sample_ball",
    "sample_ball_batch",
    "sample_sphere",
]

# Sampling is organised in fixed-size blocks.  The RNG stream for block b of a
# given purpose is derived from (seed, purpose tag, b) alone, so sample i is a
# pure function of (seed, i) and never depends on how blocks are distributed
# over workers.
BATCH_SIZE = 4096

# Purpose tags keep independent sampling streams from colliding on one seed.
_TAG_BALL = 101
_TAG_SPHERE = 211
_TAG_NCS = 307

# Rejection sampling gives up loudly after this many candidate draws per
# accepted point (only reachable for l^p balls with p outside {2, inf} in
# high dimension, where the bounding-cube acceptance rate decays).
REJECTION_DRAW_CAP = 4000


def as_point(x) -> np.ndarray:
    """Coerce ``x`` to a finite 1-d float vector.

    Raises ValueError for empty, multi-dimensional, or non-finite input.
    """
    v = np.asarray(x, dtype=float)
    if v.ndim != 1 or v.size < 1:
        raise ValueError("expected a 1-d vector with at least one coordinate")
    if not np.all(np.isfinite(v)):
        raise ValueError("vector coordinates must be finite")
    return v


def batch_rng(seed: int, tag: int, batch: int) -> np.random.Generator:
    """Deterministic generator for one (seed, purpose, block) triple."""
    return np.random.default_rng([int(seed), int(tag), int(batch)])


def iter_batches(n: int, size: int = BATCH_SIZE):
    """Yield (block_index, start, count) triples covering range(n)."""
    b, start = 0, 0
    while start < n:
        count = min(size, n - start)
        yield b, start, count
        b += 1
        start += count


@dataclass(frozen=True)
class Space:
    """R^dim under the l^p norm; ``p = math.inf`` selects the max norm."""

    dim: int
    p: float = 2.0

    def __post_init__(self):
        if int(self.dim) != self.dim or self.dim < 1:
            raise ValueError(f"dim must be a positive integer, got {self.dim!r}")
        object.__setattr__(self, "dim", int(self.dim))
        p = float(self.p)
        if math.isnan(p) or p < 1.0:
            raise ValueError(f"p must satisfy 1 <= p <= inf, got {self.p!r}")
        object.__setattr__(self, "p", p)

    @property
    def is_euclidean(self) -> bool:
        return self.p == 2.0

    @property
    def is_strictly_convex(self) -> bool:
        """True when the unit sphere contains no straight segment (1 < p < inf)."""
        return 1.0 < self.p < math.inf

    def check_point(self, x) -> np.ndarray:
        v = as_point(x)
        if v.shape[0] != self.dim:
            raise ValueError(f"expected a vector of dimension {self.dim}, got {v.shape[0]}")
        return v

    def norm(self, x):
        """l^p norm along the last axis (a scalar for a single vector)."""
        v = np.asarray(x, dtype=float)
        if math.isinf(self.p):
            return np.max(np.abs(v), axis=-1)
        if self.p == 1.0:
            return np.sum(np.abs(v), axis=-1)
        if self.p == 2.0:
            return np.sqrt(np.sum(v * v, axis=-1))
        return np.sum(np.abs(v) ** self.p, axis=-1) ** (1.0 / self.p)

    def distance(self, x, y):
        return self.norm(np.asarray(x, dtype=float) - np.asarray(y, dtype=float))

    def unit(self, x) -> np.ndarray:
        """Rescale row vector(s) to norm one; rejects zero vectors."""
        v = np.asarray(x, dtype=float)
        n = np.asarray(self.norm(v), dtype=float)
        if np.any(n == 0.0):
            raise ValueError("cannot normalise the zero vector")
        return v / n[..., None]


def inner(x, y):
    """Euclidean pairing sum(x_i * y_i) along the last axis."""
    return np.sum(np.asarray(x, dtype=float) * np.asarray(y, dtype=float), axis=-1)


def angle(x, y):
    """Angle in [0, pi] between vectors under the Euclidean pairing.

    The cosine is clamped to [-1, 1] before arccos, and the angle is 0 by
    convention whenever either argument is the zero vector.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    nx = np.sqrt(np.sum(x * x, axis=-1))
    ny = np.sqrt(np.sum(y * y, axis=-1))
    denom = nx * ny
    safe = np.where(denom > 0.0, denom, 1.0)
    cos = np.where(denom > 0.0, inner(x, y) / safe, 1.0)
    return np.arccos(np.clip(cos, -1.0, 1.0))


def _unit_block(space: Space, rng: np.random.Generator, count: int) -> np.ndarray:
    """Gaussian directions normalised to space-norm one (uniform when p = 2)."""
    g = rng.standard_normal((count, space.dim))
    return g / np.asarray(space.norm(g))[:, None]


def _ball_block(space: Space, rng: np.random.Generator, count: int) -> np.ndarray:
    """Uniform points of the unit ball of ``space`` (one RNG block)."""
    d = space.dim
    if space.p == 2.0:
        g = rng.standard_normal((count, d))
        g /= np.linalg.norm(g, axis=1, keepdims=True)
        u = rng.random(count) ** (1.0 / d)
        return g * u[:, None]
    if math.isinf(space.p):
        return rng.uniform(-1.0, 1.0, (count, d))
    # General p: rejection from the bounding cube, with a loud failure once
    # the documented draw budget is exhausted.
    out = np.empty((count, d))
    have = 0
    draws = 0
    while have < count:
        chunk = 4 * max(count - have, 256)
        draws += chunk
        if draws > REJECTION_DRAW_CAP * count:
            raise RuntimeError(
                f"rejection sampling for p={space.p}, dim={d} exceeded "
                f"{REJECTION_DRAW_CAP} draws per accepted point; "
                "this p/dim combination is impractical to sample"
            )
        cand = rng.uniform(-1.0, 1.0, (chunk, d))
        keep = cand[np.asarray(space.norm(cand)) <= 1.0]
        take = min(len(keep), count - have)
        out[have : have + take] = keep[:take]
        have += take
    return out


def sample_ball_batch(space: Space, center, radius: float, seed: int, batch: int, count: int) -> np.ndarray:
    """Block ``batch`` of the deterministic ball-sampling stream.

    Identical to the corresponding slice of :func:`sample_ball`; exposed so
    audits can generate blocks independently on worker threads.
    """
    center = space.check_point(center)
    rng = batch_rng(seed, _TAG_BALL, batch)
    return center + float(radius) * _ball_block(space, rng, count)


def sample_ball(space: Space, center, radius: float, n: int, seed: int) -> np.ndarray:
    """``n`` deterministic uniform samples from the closed ball B(center, radius).

    Uniformity: exact for p = 2 (direction by normalised Gaussian, radius by
    U^(1/dim)) and for p = inf (coordinatewise uniform); other p use rejection
    from the bounding cube.  Sample i depends only on (seed, i).
    """
    center = space.check_point(center)
    radius = float(radius)
    if radius <= 0.0:
        raise ValueError("radius must be positive")
    if n < 0:
        raise ValueError("sample count must be non-negative")
    out = np.empty((n, space.dim))
    for b, start, count in iter_batches(n):
        out[start : start + count] = sample_ball_batch(space, center, radius, seed, b, count)
    return out


def sample_sphere(space: Space, n: int, seed: int, radius: float = 1.0, center=None) -> np.ndarray:
    """``n`` deterministic points of the sphere S(center, radius) in the space norm.

    Directions are Gaussian draws normalised by the space norm: the surface
    distribution is uniform for p = 2 and merely full-support for other p,
    which is all the search/audit call sites need.
    """
    if n < 0:
        raise ValueError("sample count must be non-negative")
    radius = float(radius)
    if radius <= 0.0:
        raise ValueError("radius must be positive")
    center = np.zeros(space.dim) if center is None else space.check_point(center)
    out = np.empty((n, space.dim))
    for b, start, count in iter_batches(n):
        rng = batch_rng(seed, _TAG_SPHERE, b)
        out[start : start + count] = center + radius * _unit_block(space, rng, count)
    return out


@dataclass(frozen=True, eq=False)
class ConvexityWitness:
    """Unit vectors x != y and lam in (0, 1) whose combination stays on the sphere."""

    x: np.ndarray
    y: np.ndarray
    lam: float
    combination_norm: float


# Sampled pairs closer than this cannot witness anything: by the modulus of
# convexity, nearly-coincident unit vectors have combination norms within any
# tolerance of 1 even in strictly convex spaces.
_MIN_PAIR_SEPARATION = 1e-2


def ncs_violation_search(space: Space, samples: int, seed: int, tol: float = 1e-9) -> ConvexityWitness | None:
    """Search for a straight segment on the unit sphere of ``space``.

    Returns a witness (x, y, lam) with ||x|| = ||y|| = 1, ||x - y|| >= 1e-2 and
    ||lam*x + (1-lam)*y|| >= 1 - tol if one is found, else None.  For p = 1 and
    p = inf in dimension >= 2 a closed-form witness is returned immediately;
    for 1 < p < inf the sampled search comes up empty.

    lam candidates are 1/2 plus one uniform draw per pair, clamped to
    [0.1, 0.9]: if any interior lam keeps the combination on the sphere then
    lam = 1/2 does too, and endpoint-adjacent lam values would only produce
    degenerate near-witnesses.
    """
    if samples < 0:
        raise ValueError("sample count must be non-negative")
    d = space.dim
    if d >= 2 and space.p == 1.0:
        x = np.zeros(d)
        y = np.zeros(d)
        x[0] = 1.0
        y[1] = 1.0
        mid = 0.5 * x + 0.5 * y
        return ConvexityWitness(x, y, 0.5, float(space.norm(mid)))
    if d >= 2 and math.isinf(space.p):
        x = np.zeros(d)
        y = np.zeros(d)
        x[0] = x[1] = 1.0
        y[0], y[1] = 1.0, -1.0
        mid = 0.5 * x + 0.5 * y
        return ConvexityWitness(x, y, 0.5, float(space.norm(mid)))

    for b, _start, count in iter_batches(samples):
        rng = batch_rng(seed, _TAG_NCS, b)
        x = _unit_block(space, rng, count)
        y = _unit_block(space, rng, count)
        lam = np.clip(rng.uniform(0.0, 1.0, count), 0.1, 0.9)
        separated = np.asarray(space.norm(x - y)) >= _MIN_PAIR_SEPARATION
        norm_mid = np.asarray(space.norm(0.5 * x + 0.5 * y))
        norm_lam = np.asarray(space.norm(lam[:, None] * x + (1.0 - lam[:, None]) * y))
        hit_mid = separated & (norm_mid >= 1.0 - tol)
        hit_lam = separated & (norm_lam >= 1.0 - tol)
        hits = hit_mid | hit_lam
        if np.any(hits):
            i = int(np.argmax(hits))
            if hit_mid[i]:
                return ConvexityWitness(x[i].copy(), y[i].copy(), 0.5, float(norm_mid[i]))
            return ConvexityWitness(x[i].copy(), y[i].copy(), float(lam[i]), float(norm_lam[i]))
    return None

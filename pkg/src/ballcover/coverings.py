"""Constructions of ball coverings by congruent sets, with motion witnesses.

A covering bundles a space, an ambient closed ball (the covered set), the
list of covering sets, and optionally one witness motion per set mapping
sets[0] onto sets[i].  Set indices are 0-based everywhere, including reports
and the wire format.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .motions import Motion, SignedPermutation, identity_motion, planar_rotation_between, translation
from .shapes import ClosedBall, Ommatidium, Shape, SlabCap
from .spaces import Space, batch_rng, iter_batches, sample_sphere

__all__ = [
    "Covering",
    "DirectionNet",
    "NET_SIZE_CAP",
    "direction_net",
    "duplicate_extend",
    "halfball_covering",
    "ommatidium_covering",
    "slab_covering",
    "universal_covering",
    "universal_witness",
]

_TAG_NET_POOL = 509
_TAG_NET_PROBE = 521

# Refuse to grow a net past this many directions: the requested angle is too
# small for the dimension to be covered at a sane size.
NET_SIZE_CAP = 1024

# The greedy stop threshold is beta minus a dimension-scaled safety margin.
# The candidate pool only certifies the net at pool resolution; the margin
# absorbs that resolution so fresh directions stay within beta of the net.
_NET_MARGINS = {2: 0.02, 3: 0.06, 4: 0.10}
_NET_MARGIN_HIGH = 0.15
_NET_POOL_SIZES = {2: 1 << 14, 3: 1 << 16, 4: 1 << 17}
_NET_POOL_HIGH = 1 << 18
_CERT_PROBES = 4096


@dataclass(frozen=True, eq=False)
class Covering:
    """Sets covering ``ball`` inside ``space``, with optional congruence witnesses.

    ``witnesses[i]`` maps sets[0] onto sets[i] (so witnesses[0] is the
    identity).  ``meta`` carries constructor provenance; the key
    ``covers_ball`` records whether the finite family claims to cover the
    whole ball (the universal construction deliberately does not).
    """

    space: Space
    ball: ClosedBall
    sets: tuple[Shape, ...]
    witnesses: tuple[Motion, ...] | None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        sets = tuple(self.sets)
        if not sets:
            raise ValueError("a covering needs at least one set")
        if self.ball.dim != self.space.dim:
            raise ValueError("ball dimension must match the space")
        for s in sets:
            if s.dim != self.space.dim:
                raise ValueError("set dimension must match the space")
        witnesses = self.witnesses
        if witnesses is not None:
            witnesses = tuple(witnesses)
            if len(witnesses) != len(sets):
                raise ValueError("need exactly one witness per set")
            for w in witnesses:
                w.check_space(self.space)
        object.__setattr__(self, "sets", sets)
        object.__setattr__(self, "witnesses", witnesses)
        object.__setattr__(self, "meta", dict(self.meta))

    @property
    def count(self) -> int:
        return len(self.sets)

    def claims_ball_coverage(self) -> bool:
        return bool(self.meta.get("covers_ball", True))


@dataclass(frozen=True, eq=False)
class DirectionNet:
    """Unit directions whose caps of half-angle beta cover the sphere of
    directions, certified against a fixed budget of seeded probes."""

    directions: np.ndarray
    beta: float
    certificate: float  # max probe angle to the nearest net direction

    @property
    def size(self) -> int:
        return self.directions.shape[0]


def _unit_pool(dim: int, n: int, seed: int, tag: int) -> np.ndarray:
    out = np.empty((n, dim))
    for b, start, count in iter_batches(n):
        g = batch_rng(seed, tag, b).standard_normal((count, dim))
        out[start : start + count] = g / np.linalg.norm(g, axis=1, keepdims=True)
    return out


def direction_net(dim: int, beta: float, seed: int) -> DirectionNet:
    """Greedy farthest-point net of unit directions at angular radius ``beta``.

    Grows the net over a seeded candidate pool until every pool direction lies
    within (beta - margin) of the net, where the margin absorbs the pool's own
    angular resolution; then certifies the result against 4096 independent
    seeded probes and records the certificate (required to be <= beta).
    Raises if the net would exceed NET_SIZE_CAP directions.
    """
    if dim < 2:
        raise ValueError("direction nets need dimension >= 2")
    beta = float(beta)
    if not (0.0 < beta <= math.pi):
        raise ValueError("beta must lie in (0, pi]")

    pool = _unit_pool(dim, _NET_POOL_SIZES.get(dim, _NET_POOL_HIGH), seed, _TAG_NET_POOL)
    margin = min(beta / 3.0, _NET_MARGINS.get(dim, _NET_MARGIN_HIGH))
    stop_cos = math.cos(beta - margin)

    dirs = [pool[0]]
    best_cos = pool @ pool[0]
    while True:
        worst = int(np.argmin(best_cos))
        if best_cos[worst] >= stop_cos:
            break
        if len(dirs) >= NET_SIZE_CAP:
            raise ValueError(
                f"direction net for dim={dim}, beta={beta} exceeded {NET_SIZE_CAP} "
                "directions; the angle is too small for this dimension"
            )
        dirs.append(pool[worst])
        np.maximum(best_cos, pool @ pool[worst], out=best_cos)

    directions = np.array(dirs)
    probes = _unit_pool(dim, _CERT_PROBES, seed, _TAG_NET_PROBE)
    probe_cos = np.clip((probes @ directions.T).max(axis=1), -1.0, 1.0)
    certificate = float(np.arccos(probe_cos).max())
    if certificate > beta:
        raise RuntimeError(
            f"net certification failed: probe gap {certificate} exceeds beta {beta}"
        )
    return DirectionNet(directions, beta, certificate)


def _unit_ball(dim: int) -> ClosedBall:
    return ClosedBall(np.zeros(dim), 1.0)


def slab_covering(n: int, m: int) -> Covering:
    """Cover the unit max-norm ball in R^m by ``n`` coordinate slabs.

    Slab i is the cap x[0] in [-1 + 2i/n, -1 + 2(i+1)/n] of the unit ball,
    witnesses are axis-0 translations, and only the middle slab (index n // 2)
    has the centre in its interior.  Requires odd n >= 3 and m >= n.
    """
    if int(n) != n or n < 3 or n % 2 == 0:
        raise ValueError("slab count n must be an odd integer >= 3")
    if int(m) != m or m < n:
        raise ValueError("dimension m must be an integer >= n")
    n, m = int(n), int(m)
    space = Space(m, math.inf)
    ball = _unit_ball(m)
    sets = []
    witnesses = []
    for i in range(n):
        lo = -1.0 + 2.0 * i / n
        hi = -1.0 + 2.0 * (i + 1) / n
        sets.append(SlabCap(ball, 0, lo, hi))
        shift = np.zeros(m)
        shift[0] = 2.0 * i / n
        witnesses.append(translation(shift) if i else identity_motion(m))
    meta = {"kind": "slab", "n": n, "m": m, "middle_index": n // 2, "covers_ball": True}
    return Covering(space, ball, tuple(sets), tuple(witnesses), meta)


def universal_witness(space: Space, x) -> np.ndarray:
    """The point y = x / (2 ||x||), which satisfies ||x - y|| = | ||x|| - 1/2 | <= 1/2
    for every x of the closed unit ball except the centre (where it is undefined)."""
    x = space.check_point(x)
    n = float(space.norm(x))
    if n == 0.0:
        raise ValueError("the centre has no half-radius witness")
    if n > 1.0 + 1e-9:
        raise ValueError("witness points are defined on the closed unit ball only")
    return x * (0.5 / n)


def universal_covering(dim: int, k: int, seed: int, p: float = 2.0) -> Covering:
    """Half-radius balls: B(0, 1/2) plus ``k`` balls B(y, 1/2) with y sampled
    from the sphere of radius 1/2.

    The full (uncountable) family of such balls covers the unit ball -- each x
    is within 1/2 of its :func:`universal_witness` -- but no finite subfamily
    is claimed to, and the metadata says so.  Witnesses are translations.
    """
    if int(k) != k or k < 1:
        raise ValueError("k must be an integer >= 1")
    k = int(k)
    space = Space(dim, p)
    ball = _unit_ball(space.dim)
    centers = sample_sphere(space, k, seed, radius=0.5)
    sets: list[Shape] = [ClosedBall(np.zeros(space.dim), 0.5)]
    witnesses = [identity_motion(space.dim)]
    for y in centers:
        sets.append(ClosedBall(y, 0.5))
        witnesses.append(translation(y))
    meta = {"kind": "universal", "k": k, "seed": int(seed), "covers_ball": False}
    return Covering(space, ball, tuple(sets), tuple(witnesses), meta)


def ommatidium_covering(dim: int, beta: float, seed: int) -> Covering:
    """Cover the Euclidean unit ball by congruent sectors of angle pi/4.

    Sets 1..k are the sectors C(0, d_i, pi/4) over a beta-net of directions
    d_i (beta <= pi/4, so every direction lies within the sector angle of some
    d_i); set 0 is the congruent shifted sector C(-d_1/2, d_1/2, pi/4), the
    only set with the centre in its interior.  Witnesses rotate d_1 onto d_i
    and translate the apex accordingly.
    """
    beta = float(beta)
    if not (0.0 < beta <= math.pi / 4.0):
        raise ValueError("beta must lie in (0, pi/4]")
    if dim < 2:
        raise ValueError("sector coverings need dimension >= 2")
    gamma = math.pi / 4.0
    space = Space(dim, 2.0)
    ball = _unit_ball(dim)
    net = direction_net(dim, beta, seed)
    d1 = net.directions[0]
    origin = np.zeros(dim)

    sets: list[Shape] = [Ommatidium(-0.5 * d1, 0.5 * d1, gamma)]
    witnesses = [identity_motion(dim)]
    for d in net.directions:
        sets.append(Ommatidium(origin, d, gamma))
        rot = planar_rotation_between(d1, d)
        witnesses.append(Motion(rot.linear, 0.5 * d))
    meta = {
        "kind": "ommatidium",
        "dim": int(dim),
        "beta": beta,
        "gamma": gamma,
        "seed": int(seed),
        "net_size": net.size,
        "net_certificate": net.certificate,
        "covers_ball": True,
    }
    return Covering(space, ball, tuple(sets), tuple(witnesses), meta)


def halfball_covering(dim: int) -> Covering:
    """The Euclidean unit ball split into the caps x[0] <= 0 and x[0] >= 0.

    The witness is the sign flip of axis 0; the centre lies in neither
    interior.
    """
    if dim < 1:
        raise ValueError("dimension must be >= 1")
    space = Space(dim, 2.0)
    ball = _unit_ball(dim)
    sets = (SlabCap(ball, 0, -1.0, 0.0), SlabCap(ball, 0, 0.0, 1.0))
    flip = SignedPermutation(tuple(range(dim)), (-1,) + (1,) * (dim - 1))
    witnesses = (identity_motion(dim), Motion(flip, np.zeros(dim)))
    meta = {"kind": "halfball", "dim": int(dim), "covers_ball": True}
    return Covering(space, ball, sets, witnesses, meta)


def duplicate_extend(cov: Covering, n: int) -> Covering:
    """Pad a covering to ``n`` sets by repeating its last set.

    Witnesses for the duplicates are copies of the last witness (which is the
    identity when the covering has a single set); the union, centre
    classification, and audit outcomes are unchanged.
    """
    if int(n) != n or n < cov.count:
        raise ValueError(f"cannot extend {cov.count} sets to {n}")
    n = int(n)
    extra = n - cov.count
    sets = cov.sets + (cov.sets[-1],) * extra
    witnesses = None
    if cov.witnesses is not None:
        witnesses = cov.witnesses + (cov.witnesses[-1],) * extra
    meta = dict(cov.meta)
    meta["extended_to"] = n
    return Covering(cov.space, cov.ball, sets, witnesses, meta)

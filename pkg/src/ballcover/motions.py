"""Surjective isometries of R^dim, represented structurally.

A :class:`Motion` is a structural linear isometry followed by a shift.  The
linear part is a word over three audited variants -- identity, rotation in a
coordinate plane spanned by two orthonormal vectors, and signed coordinate
permutation -- so applying, composing, and inverting motions is exact (no
matrix inversion, no black-box callables).  No claim is made that these
variants exhaust the isometry group of any particular norm; they are the ones
the covering constructions need.

Every zero-fixing member of the family is linear by construction, and the
module ships audits (:func:`motion_audit`) that measure isometry, sphere
preservation, linearity of the zero-fixing part, and -- in the Euclidean case
-- preservation of the inner product, rather than assuming them.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .reports import AuditReport, make_report
from .spaces import Space, as_point, batch_rng, inner, iter_batches

__all__ = [
    "ComposedLinear",
    "Identity",
    "LinearIsometry",
    "Motion",
    "PlanarRotation",
    "ScaledLinear",
    "SignedPermutation",
    "compose",
    "decompose",
    "identity_motion",
    "motion_audit",
    "planar_rotation_between",
    "scale_linear_part",
    "translation",
    "trivial_shift_premise",
]

_TAG_AUDIT = 409


class LinearIsometry:
    """Base for the structural linear variants."""

    dim: int

    def apply(self, x: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def inverse(self) -> "LinearIsometry":
        raise NotImplementedError

    @property
    def needs_euclidean(self) -> bool:
        """Whether this variant is an isometry only for the p = 2 norm."""
        raise NotImplementedError


@dataclass(frozen=True, eq=False)
class Identity(LinearIsometry):
    dim: int

    def apply(self, x):
        return np.asarray(x, dtype=float)

    def inverse(self):
        return self

    @property
    def needs_euclidean(self):
        return False


@dataclass(frozen=True, eq=False)
class PlanarRotation(LinearIsometry):
    """Rotation by ``alpha`` in the oriented plane span(e1u, u), identity on its
    orthogonal complement.

    ``e1u`` and ``u`` must be Euclidean-orthonormal; this map is an isometry
    only for the Euclidean norm.
    """

    e1u: np.ndarray
    u: np.ndarray
    alpha: float

    def __post_init__(self):
        e1u = as_point(self.e1u)
        u = as_point(self.u)
        if e1u.shape[0] != u.shape[0]:
            raise ValueError("plane vectors must share a dimension")
        if abs(np.linalg.norm(e1u) - 1.0) > 1e-12 or abs(np.linalg.norm(u) - 1.0) > 1e-12:
            raise ValueError("plane vectors must be unit length")
        if abs(float(np.dot(e1u, u))) > 1e-12:
            raise ValueError("plane vectors must be orthogonal")
        object.__setattr__(self, "e1u", e1u)
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "alpha", float(self.alpha))

    @property
    def dim(self):
        return self.e1u.shape[0]

    def apply(self, x):
        x = np.asarray(x, dtype=float)
        x1 = x @ self.e1u
        x2 = x @ self.u
        c = math.cos(self.alpha)
        s = math.sin(self.alpha)
        return (
            x
            + ((c - 1.0) * x1 - s * x2)[..., None] * self.e1u
            + (s * x1 + (c - 1.0) * x2)[..., None] * self.u
        )

    def inverse(self):
        return PlanarRotation(self.e1u, self.u, -self.alpha)

    @property
    def needs_euclidean(self):
        return True


@dataclass(frozen=True, eq=False)
class SignedPermutation(LinearIsometry):
    """y[i] = signs[i] * x[perm[i]]; an isometry for every l^p norm."""

    perm: tuple[int, ...]
    signs: tuple[int, ...]

    def __post_init__(self):
        perm = tuple(int(i) for i in self.perm)
        signs = tuple(int(s) for s in self.signs)
        if sorted(perm) != list(range(len(perm))):
            raise ValueError("perm must be a permutation of range(dim)")
        if len(signs) != len(perm) or any(s not in (-1, 1) for s in signs):
            raise ValueError("signs must be +/-1 with one entry per coordinate")
        object.__setattr__(self, "perm", perm)
        object.__setattr__(self, "signs", signs)

    @property
    def dim(self):
        return len(self.perm)

    def apply(self, x):
        x = np.asarray(x, dtype=float)
        return x[..., list(self.perm)] * np.asarray(self.signs, dtype=float)

    def inverse(self):
        iperm = [0] * self.dim
        for i, j in enumerate(self.perm):
            iperm[j] = i
        isigns = tuple(self.signs[iperm[j]] for j in range(self.dim))
        return SignedPermutation(tuple(iperm), isigns)

    @property
    def needs_euclidean(self):
        return False


@dataclass(frozen=True, eq=False)
class ComposedLinear(LinearIsometry):
    """Word over the variants, applied first-to-last.

    Keeps the motion algebra closed under composition while staying exact and
    structural.  In-memory only: the wire format carries single variants, and
    none of the covering constructors produce composed linear parts.
    """

    parts: tuple[LinearIsometry, ...]

    def __post_init__(self):
        parts = tuple(self.parts)
        if len(parts) < 2:
            raise ValueError("a composed linear part needs at least two factors")
        dims = {p.dim for p in parts}
        if len(dims) != 1:
            raise ValueError("all factors must share a dimension")
        object.__setattr__(self, "parts", parts)

    @property
    def dim(self):
        return self.parts[0].dim

    def apply(self, x):
        y = np.asarray(x, dtype=float)
        for part in self.parts:
            y = part.apply(y)
        return y

    def inverse(self):
        return ComposedLinear(tuple(p.inverse() for p in reversed(self.parts)))

    @property
    def needs_euclidean(self):
        return any(p.needs_euclidean for p in self.parts)


@dataclass(frozen=True, eq=False)
class ScaledLinear(LinearIsometry):
    """Deliberately corrupted linear part: ``factor * base``.

    Not an isometry for factor != 1 -- it exists so negative controls can
    exercise the audits.  In-memory only; the serializer rejects it.
    """

    base: LinearIsometry
    factor: float

    @property
    def dim(self):
        return self.base.dim

    def apply(self, x):
        return float(self.factor) * self.base.apply(x)

    def inverse(self):
        return ScaledLinear(self.base.inverse(), 1.0 / float(self.factor))

    @property
    def needs_euclidean(self):
        return self.base.needs_euclidean


@dataclass(frozen=True, eq=False)
class Motion:
    """x -> linear(x) + shift."""

    linear: LinearIsometry
    shift: np.ndarray

    def __post_init__(self):
        shift = as_point(self.shift)
        if shift.shape[0] != self.linear.dim:
            raise ValueError("shift dimension must match the linear part")
        object.__setattr__(self, "shift", shift)

    @property
    def dim(self) -> int:
        return self.linear.dim

    def apply(self, x) -> np.ndarray:
        return self.linear.apply(x) + self.shift

    def __call__(self, x) -> np.ndarray:
        return self.apply(x)

    def inverse(self) -> "Motion":
        linv = self.linear.inverse()
        return Motion(linv, -linv.apply(self.shift))

    def check_space(self, space: Space) -> None:
        """Raise unless this motion is an isometry of ``space``."""
        if self.dim != space.dim:
            raise ValueError(f"motion dimension {self.dim} != space dimension {space.dim}")
        if self.linear.needs_euclidean and not space.is_euclidean:
            raise ValueError("planar rotations are isometries only for the p = 2 norm")


def identity_motion(dim: int) -> Motion:
    return Motion(Identity(dim), np.zeros(dim))


def translation(shift) -> Motion:
    shift = as_point(shift)
    return Motion(Identity(shift.shape[0]), shift)


def scale_linear_part(m: Motion, factor: float) -> Motion:
    """Negative-control helper: corrupt the linear part by a scalar factor."""
    return Motion(ScaledLinear(m.linear, float(factor)), m.shift)


def _compose_linear(outer: LinearIsometry, inner_part: LinearIsometry) -> LinearIsometry:
    if isinstance(inner_part, Identity):
        return outer
    if isinstance(outer, Identity):
        return inner_part
    if isinstance(outer, SignedPermutation) and isinstance(inner_part, SignedPermutation):
        perm = tuple(inner_part.perm[j] for j in outer.perm)
        signs = tuple(outer.signs[i] * inner_part.signs[outer.perm[i]] for i in range(outer.dim))
        return SignedPermutation(perm, signs)
    if (
        isinstance(outer, PlanarRotation)
        and isinstance(inner_part, PlanarRotation)
        and np.array_equal(outer.e1u, inner_part.e1u)
        and np.array_equal(outer.u, inner_part.u)
    ):
        return PlanarRotation(outer.e1u, outer.u, outer.alpha + inner_part.alpha)
    inner_parts = inner_part.parts if isinstance(inner_part, ComposedLinear) else (inner_part,)
    outer_parts = outer.parts if isinstance(outer, ComposedLinear) else (outer,)
    return ComposedLinear(inner_parts + outer_parts)


def compose(outer: Motion, inner_motion: Motion) -> Motion:
    """The motion x -> outer(inner_motion(x))."""
    if outer.dim != inner_motion.dim:
        raise ValueError("cannot compose motions of different dimensions")
    linear = _compose_linear(outer.linear, inner_motion.linear)
    shift = outer.linear.apply(inner_motion.shift) + outer.shift
    return Motion(linear, shift)


def decompose(m: Motion) -> tuple[Motion, Motion]:
    """Split ``m = h o g`` with g zero-fixing and h a pure shift by m(0).

    The split is exact: g is m with its shift removed and h translates by
    m(0) = shift, so h(g(x)) reproduces m(x) without tolerance.
    """
    g = Motion(m.linear, np.zeros(m.dim))
    h = Motion(Identity(m.dim), m.shift.copy())
    return g, h


def planar_rotation_between(e1, e2, tol: float = 1e-9) -> Motion:
    """Zero-shift motion rotating ``e1`` onto ``e2`` inside their common plane.

    Requires equal Euclidean lengths within ``tol``.  For e2 = e1 the identity
    is returned; for e2 = -e1 the rotation half-plane is pinned by the first
    canonical basis vector whose component orthogonal to e1 has length at
    least 1e-6.
    """
    e1 = as_point(e1)
    e2 = as_point(e2)
    if e1.shape[0] != e2.shape[0]:
        raise ValueError("endpoints must share a dimension")
    r1 = float(np.linalg.norm(e1))
    r2 = float(np.linalg.norm(e2))
    if r1 == 0.0 or r2 == 0.0:
        raise ValueError("cannot rotate the zero vector")
    if abs(r1 - r2) > tol * max(1.0, r1):
        raise ValueError(f"lengths differ: {r1!r} vs {r2!r}")
    dim = e1.shape[0]
    a = e1 / r1
    b = e2 / r2
    cos_alpha = float(np.clip(np.dot(a, b), -1.0, 1.0))
    w = b - cos_alpha * a
    wn = float(np.linalg.norm(w))
    if wn > 1e-12:
        u = w / wn
        alpha = math.atan2(wn, cos_alpha)
        return Motion(PlanarRotation(a, u, alpha), np.zeros(dim))
    if cos_alpha > 0.0:
        return identity_motion(dim)
    # Antipodal endpoints: any plane through e1 works; take the first canonical
    # axis with a usable orthogonal component so the choice is reproducible.
    for i in range(dim):
        cand = np.zeros(dim)
        cand[i] = 1.0
        cand -= float(np.dot(cand, a)) * a
        cn = float(np.linalg.norm(cand))
        if cn >= 1e-6:
            return Motion(PlanarRotation(a, cand / cn, math.pi), np.zeros(dim))
    raise ValueError("no usable rotation plane found (dimension must be >= 2)")


def trivial_shift_premise(space: Space, m: Motion, x, tol: float = 1e-9) -> bool:
    """Whether ||m(x)|| <= ||x|| + tol and ||m(-x)|| <= ||x|| + tol.

    In a strictly convex space this premise at any point forces the shift of
    the motion to vanish; in non-strictly-convex norms it can hold for motions
    with genuinely non-zero shifts.
    """
    m.check_space(space)
    x = space.check_point(x)
    bound = float(space.norm(x)) + tol
    return float(space.norm(m.apply(x))) <= bound and float(space.norm(m.apply(-x))) <= bound


def _audit_block(space: Space, m: Motion, g: Motion, seed: int, b: int, start: int, count: int, tol: float):
    """Residuals for one sample block; returns (failure pairs, count, max residual)."""
    rng = batch_rng(seed, _TAG_AUDIT, b)
    d = space.dim
    x = rng.standard_normal((count, d)) * rng.uniform(0.2, 2.0, (count, 1))
    y = rng.standard_normal((count, d)) * rng.uniform(0.2, 2.0, (count, 1))

    # Distance preservation between sampled pairs.
    res = np.abs(space.norm(m.apply(x) - m.apply(y)) - space.norm(x - y))

    # Sphere preservation: points of S(c, r) must land on S(m(c), r).
    centers = rng.standard_normal((count, d))
    radii = rng.uniform(0.5, 2.0, count)
    dirs = rng.standard_normal((count, d))
    dirs /= np.asarray(space.norm(dirs))[:, None]
    on_sphere = centers + radii[:, None] * dirs
    res = np.maximum(res, np.abs(space.norm(m.apply(on_sphere) - m.apply(centers)) - radii))

    # The zero-fixing part must act linearly on random combinations.
    lam = rng.uniform(-2.0, 2.0, (count, 1))
    mu = rng.uniform(-2.0, 2.0, (count, 1))
    lin_gap = space.norm(g.apply(lam * x + mu * y) - lam * g.apply(x) - mu * g.apply(y))
    res = np.maximum(res, lin_gap)

    if space.is_euclidean:
        res = np.maximum(res, np.abs(inner(g.apply(x), g.apply(y)) - inner(x, y)))

    bad = np.nonzero(res > tol)[0]
    pairs = [(start + int(i), x[i].copy()) for i in bad[:16]]
    return pairs, int(bad.size), float(res.max(initial=0.0))


def motion_audit(
    space: Space,
    m: Motion,
    samples: int,
    seed: int,
    tol: float = 1e-9,
    workers: int = 1,
) -> AuditReport:
    """Measure how far ``m`` is from a surjective isometry of ``space``.

    Per sampled configuration the residual is the max over: distance
    preservation, sphere-to-sphere preservation, linearity of the zero-fixing
    part over combinations with |lam|, |mu| <= 2, and (p = 2 only) inner
    product preservation by the zero-fixing part.  The report is byte-stable
    across worker counts.
    """
    t0 = time.perf_counter()
    m.check_space(space)
    g, _h = decompose(m)
    blocks = list(iter_batches(samples))

    def run(block):
        b, start, count = block
        return _audit_block(space, m, g, seed, b, start, count, tol)

    if workers > 1 and len(blocks) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, blocks))
    else:
        results = [run(block) for block in blocks]

    failure_points: list[tuple[int, np.ndarray]] = []
    failures = 0
    residual = 0.0
    for pairs, cnt, res in results:
        failure_points.extend(pairs)
        failures += cnt
        residual = max(residual, res)
    runtime_ms = (time.perf_counter() - t0) * 1e3
    return make_report("motion", samples, seed, failure_points, failures, residual, runtime_ms)

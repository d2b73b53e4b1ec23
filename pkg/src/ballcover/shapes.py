"""Point sets with membership, signed defects, and interior classification.

Membership is tolerance-aware (closed sets use <= + tol, open ones < - tol)
and vectorised over rows of points.  Interior classification works at a probe
resolution ``eps``: Interior means a certified margin of at least eps in the
space norm, NotInterior comes with a verified escape witness within eps of the
query point, and Boundary is the honest remainder -- it never silently
upgrades to either certified verdict.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .motions import Motion, compose
from .spaces import Space, angle, as_point

__all__ = [
    "INTERIOR_EPS",
    "MEMBERSHIP_TOL",
    "ClosedBall",
    "FiniteUnion",
    "Image",
    "InteriorStatus",
    "OpenBall",
    "Ommatidium",
    "Shape",
    "SlabCap",
    "Sphere",
    "contains",
    "image",
    "interior_classify",
]

MEMBERSHIP_TOL = 1e-9
INTERIOR_EPS = 1e-6

# Escape probes for unions use a fixed internal stream (they are a probe
# pattern, not a sampling experiment, so they are not user-seeded).
_UNION_PROBE_SEED = 20260825
_UNION_RANDOM_PROBES = 64

INTERIOR = "interior"
NOT_INTERIOR = "not_interior"
BOUNDARY = "boundary"


@dataclass(frozen=True, eq=False)
class InteriorStatus:
    """Verdict of interior classification at resolution eps.

    For NOT_INTERIOR the witness w satisfies ||w - x|| <= eps in the space
    norm and fails membership at the classification tolerance.
    """

    kind: str
    witness: np.ndarray | None = None

    @property
    def is_interior(self) -> bool:
        return self.kind == INTERIOR

    @property
    def is_boundary(self) -> bool:
        return self.kind == BOUNDARY

    @staticmethod
    def interior() -> "InteriorStatus":
        return InteriorStatus(INTERIOR)

    @staticmethod
    def not_interior(witness: np.ndarray) -> "InteriorStatus":
        return InteriorStatus(NOT_INTERIOR, np.asarray(witness, dtype=float))

    @staticmethod
    def boundary() -> "InteriorStatus":
        return InteriorStatus(BOUNDARY)


def _rows(space: Space, x) -> tuple[np.ndarray, bool]:
    X = np.asarray(x, dtype=float)
    if X.ndim == 1:
        if X.shape[0] != space.dim:
            raise ValueError(f"expected dimension {space.dim}, got {X.shape[0]}")
        return X[None, :], True
    if X.ndim != 2 or X.shape[1] != space.dim:
        raise ValueError(f"expected points of dimension {space.dim}")
    return X, False


def _axis_unit(dim: int, axis: int) -> np.ndarray:
    e = np.zeros(dim)
    e[axis] = 1.0
    return e


class Shape:
    """Base class; subclasses implement the vectorised _contains/_defect."""

    dim: int

    def _contains(self, space: Space, X: np.ndarray, tol: float) -> np.ndarray:
        raise NotImplementedError

    def _defect(self, space: Space, X: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def contains(self, space: Space, x, tol: float = MEMBERSHIP_TOL):
        """Membership of a point (-> bool) or of rows of points (-> bool array)."""
        X, single = _rows(space, x)
        mask = self._contains(space, X, float(tol))
        return bool(mask[0]) if single else mask

    def defect(self, space: Space, x):
        """Signed violation measure: <= 0 on the set, > 0 outside.

        Each primitive constraint contributes in its own scale (lengths for
        radial/slab constraints, radians for angular ones); a shape's defect
        is the max over its constraints, a union's the min over its parts.
        """
        X, single = _rows(space, x)
        d = self._defect(space, X)
        return float(d[0]) if single else d

    def interior_classify(self, space: Space, x, eps: float = INTERIOR_EPS, tol: float = MEMBERSHIP_TOL) -> InteriorStatus:
        raise NotImplementedError

    def transform(self, motion: Motion) -> "Shape":
        """Image under a motion; balls and spheres move structurally, the rest wrap."""
        return Image(self, motion)


def _classify_by_probes(shape: Shape, space: Space, x: np.ndarray, probes, tol: float) -> InteriorStatus:
    """NotInterior on the first probe that verifiably escapes, else Boundary."""
    for w in probes:
        if w is not None and not shape.contains(space, w, tol):
            return InteriorStatus.not_interior(w)
    return InteriorStatus.boundary()


@dataclass(frozen=True, eq=False)
class ClosedBall(Shape):
    center: np.ndarray
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", as_point(self.center))
        r = float(self.radius)
        if not (r > 0.0) or not math.isfinite(r):
            raise ValueError("radius must be positive and finite")
        object.__setattr__(self, "radius", r)

    @property
    def dim(self):
        return self.center.shape[0]

    def _contains(self, space, X, tol):
        return np.asarray(space.norm(X - self.center)) <= self.radius + tol

    def _defect(self, space, X):
        return np.asarray(space.norm(X - self.center)) - self.radius

    def interior_classify(self, space, x, eps=INTERIOR_EPS, tol=MEMBERSHIP_TOL):
        x = space.check_point(x)
        if not self.contains(space, x, tol):
            return InteriorStatus.not_interior(x.copy())
        dist = float(space.distance(x, self.center))
        if self.radius - dist >= eps:
            return InteriorStatus.interior()
        if dist > 0.0:
            w = x + (eps / dist) * (x - self.center)
        else:
            w = x + eps * _axis_unit(self.dim, 0)
        return _classify_by_probes(self, space, x, [w], tol)

    def transform(self, motion):
        return ClosedBall(motion.apply(self.center), self.radius)


@dataclass(frozen=True, eq=False)
class OpenBall(Shape):
    center: np.ndarray
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", as_point(self.center))
        r = float(self.radius)
        if not (r > 0.0) or not math.isfinite(r):
            raise ValueError("radius must be positive and finite")
        object.__setattr__(self, "radius", r)

    @property
    def dim(self):
        return self.center.shape[0]

    def _contains(self, space, X, tol):
        return np.asarray(space.norm(X - self.center)) < self.radius - tol

    def _defect(self, space, X):
        # Boundary points of the closure score 0; the strictness lives in
        # membership, not in the continuous defect.
        return np.asarray(space.norm(X - self.center)) - self.radius

    def interior_classify(self, space, x, eps=INTERIOR_EPS, tol=MEMBERSHIP_TOL):
        x = space.check_point(x)
        if not self.contains(space, x, tol):
            return InteriorStatus.not_interior(x.copy())
        dist = float(space.distance(x, self.center))
        if self.radius - dist >= eps:
            return InteriorStatus.interior()
        if dist > 0.0:
            w = x + (eps / dist) * (x - self.center)
        else:
            w = x + eps * _axis_unit(self.dim, 0)
        return _classify_by_probes(self, space, x, [w], tol)

    def transform(self, motion):
        return OpenBall(motion.apply(self.center), self.radius)


@dataclass(frozen=True, eq=False)
class Sphere(Shape):
    center: np.ndarray
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", as_point(self.center))
        r = float(self.radius)
        if not (r > 0.0) or not math.isfinite(r):
            raise ValueError("radius must be positive and finite")
        object.__setattr__(self, "radius", r)

    @property
    def dim(self):
        return self.center.shape[0]

    def _contains(self, space, X, tol):
        return np.abs(np.asarray(space.norm(X - self.center)) - self.radius) <= tol

    def _defect(self, space, X):
        return np.abs(np.asarray(space.norm(X - self.center)) - self.radius)

    def interior_classify(self, space, x, eps=INTERIOR_EPS, tol=MEMBERSHIP_TOL):
        # A sphere has empty interior: radial escape always works.
        x = space.check_point(x)
        if not self.contains(space, x, tol):
            return InteriorStatus.not_interior(x.copy())
        dist = float(space.distance(x, self.center))
        w = x + (eps / dist) * (x - self.center)
        return _classify_by_probes(self, space, x, [w], tol)

    def transform(self, motion):
        return Sphere(motion.apply(self.center), self.radius)


@dataclass(frozen=True, eq=False)
class Ommatidium(Shape):
    """Ball sector: points within ||endpoint - origin|| of ``origin`` whose
    direction from the origin is within angle ``gamma`` of endpoint - origin.

    gamma = 0 degenerates to the segment [origin, endpoint]; gamma = pi is the
    full closed ball.  The origin itself is always a member (the angle at the
    apex is 0 by convention).  Angles are Euclidean, so membership is defined
    only for p = 2 spaces.
    """

    origin: np.ndarray
    endpoint: np.ndarray
    gamma: float

    def __post_init__(self):
        s = as_point(self.origin)
        e = as_point(self.endpoint)
        if s.shape[0] != e.shape[0]:
            raise ValueError("origin and endpoint must share a dimension")
        g = float(self.gamma)
        if not (0.0 <= g <= math.pi):
            raise ValueError("gamma must lie in [0, pi]")
        r = float(np.linalg.norm(e - s))
        if r == 0.0:
            raise ValueError("endpoint must differ from origin")
        object.__setattr__(self, "origin", s)
        object.__setattr__(self, "endpoint", e)
        object.__setattr__(self, "gamma", g)
        object.__setattr__(self, "sector_radius", r)
        object.__setattr__(self, "axis", (e - s) / r)

    @property
    def dim(self):
        return self.origin.shape[0]

    @staticmethod
    def _require_euclidean(space: Space):
        if not space.is_euclidean:
            raise ValueError("sector membership relies on angles and needs the p = 2 norm")

    def _radii_cos(self, X):
        v = X - self.origin
        r = np.sqrt(np.sum(v * v, axis=-1))
        safe = np.where(r > 0.0, r, 1.0)
        cos = np.where(r > 0.0, (v @ self.axis) / safe, 1.0)
        return r, np.clip(cos, -1.0, 1.0)

    def _contains(self, space, X, tol):
        self._require_euclidean(space)
        r, cos = self._radii_cos(X)
        cos_limit = math.cos(min(self.gamma + tol, math.pi))
        return (r <= self.sector_radius + tol) & (cos >= cos_limit)

    def _defect(self, space, X):
        self._require_euclidean(space)
        r, cos = self._radii_cos(X)
        return np.maximum(r - self.sector_radius, np.arccos(cos) - self.gamma)

    def interior_classify(self, space, x, eps=INTERIOR_EPS, tol=MEMBERSHIP_TOL):
        self._require_euclidean(space)
        x = space.check_point(x)
        if not self.contains(space, x, tol):
            return InteriorStatus.not_interior(x.copy())
        v = x - self.origin
        r = float(np.linalg.norm(v))
        full_ball = self.gamma >= math.pi
        if r == 0.0:
            if full_ball and self.sector_radius >= eps:
                return InteriorStatus.interior()
            # The apex of a proper sector is never interior: step backwards
            # along the axis.
            return _classify_by_probes(self, space, x, [x - eps * self.axis], tol)
        ang = float(angle(v, self.axis))
        radial_margin = self.sector_radius - r
        if full_ball:
            margin = radial_margin
        else:
            margin = min(radial_margin, r * math.sin(min(self.gamma - ang, 0.5 * math.pi)))
        if margin >= eps:
            return InteriorStatus.interior()
        probes = [x + (eps / r) * v, x - eps * self.axis]
        perp = v - (v @ self.axis) * self.axis
        pn = float(np.linalg.norm(perp))
        if pn > 1e-12:
            probes.insert(1, x + (eps / pn) * perp)
        else:
            for i in range(self.dim):
                cand = _axis_unit(self.dim, i) - self.axis[i] * self.axis
                cn = float(np.linalg.norm(cand))
                if cn >= 1e-6:
                    probes.insert(1, x + (eps / cn) * cand)
                    break
        return _classify_by_probes(self, space, x, probes, tol)


@dataclass(frozen=True, eq=False)
class SlabCap(Shape):
    """Points of a closed ball whose ``axis`` coordinate lies in [lo, hi]."""

    ball: ClosedBall
    axis: int
    lo: float
    hi: float

    def __post_init__(self):
        if not isinstance(self.ball, ClosedBall):
            raise ValueError("slab caps cut a ClosedBall")
        a = int(self.axis)
        if not (0 <= a < self.ball.dim):
            raise ValueError("axis out of range")
        lo, hi = float(self.lo), float(self.hi)
        if not (lo <= hi):
            raise ValueError("need lo <= hi")
        object.__setattr__(self, "axis", a)
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def dim(self):
        return self.ball.dim

    def _contains(self, space, X, tol):
        coord = X[:, self.axis]
        return (
            self.ball._contains(space, X, tol)
            & (coord >= self.lo - tol)
            & (coord <= self.hi + tol)
        )

    def _defect(self, space, X):
        coord = X[:, self.axis]
        return np.maximum(
            self.ball._defect(space, X), np.maximum(self.lo - coord, coord - self.hi)
        )

    def interior_classify(self, space, x, eps=INTERIOR_EPS, tol=MEMBERSHIP_TOL):
        x = space.check_point(x)
        if not self.contains(space, x, tol):
            return InteriorStatus.not_interior(x.copy())
        dist = float(space.distance(x, self.ball.center))
        margin = min(self.ball.radius - dist, x[self.axis] - self.lo, self.hi - x[self.axis])
        if margin >= eps:
            return InteriorStatus.interior()
        e_a = _axis_unit(self.dim, self.axis)
        probes = [x + eps * e_a, x - eps * e_a]
        if dist > 0.0:
            probes.insert(0, x + (eps / dist) * (x - self.ball.center))
        return _classify_by_probes(self, space, x, probes, tol)


@dataclass(frozen=True, eq=False)
class Image(Shape):
    """A shape pushed forward through a motion; membership pulls points back."""

    inner: Shape
    motion: Motion

    def __post_init__(self):
        if self.inner.dim != self.motion.dim:
            raise ValueError("motion dimension must match the shape")

    @property
    def dim(self):
        return self.inner.dim

    def _contains(self, space, X, tol):
        return self.inner._contains(space, self.motion.inverse().apply(X), tol)

    def _defect(self, space, X):
        return self.inner._defect(space, self.motion.inverse().apply(X))

    def interior_classify(self, space, x, eps=INTERIOR_EPS, tol=MEMBERSHIP_TOL):
        # Motions preserve distances, so interior status transports exactly;
        # witnesses are mapped forward to stay witnesses for the image.
        status = self.inner.interior_classify(space, self.motion.inverse().apply(x), eps, tol)
        if status.witness is not None:
            return InteriorStatus(status.kind, self.motion.apply(status.witness))
        return status

    def transform(self, motion):
        return Image(self.inner, compose(motion, self.motion))


@dataclass(frozen=True, eq=False)
class FiniteUnion(Shape):
    parts: tuple[Shape, ...]

    def __post_init__(self):
        parts = tuple(self.parts)
        if not parts:
            raise ValueError("a union needs at least one part")
        if len({p.dim for p in parts}) != 1:
            raise ValueError("union parts must share a dimension")
        object.__setattr__(self, "parts", parts)

    @property
    def dim(self):
        return self.parts[0].dim

    def _contains(self, space, X, tol):
        mask = np.zeros(X.shape[0], dtype=bool)
        for part in self.parts:
            todo = ~mask
            if not np.any(todo):
                break
            mask[todo] = part._contains(space, X[todo], tol)
        return mask

    def _defect(self, space, X):
        d = self.parts[0]._defect(space, X)
        for part in self.parts[1:]:
            d = np.minimum(d, part._defect(space, X))
        return d

    def interior_classify(self, space, x, eps=INTERIOR_EPS, tol=MEMBERSHIP_TOL):
        """Interior if some part certifies it; NotInterior if a common escape
        probe leaves every part; else Boundary.

        This is conservative: a union can have interior points certified by no
        single part (two half balls meeting along a hyperplane), and those
        honestly classify as Boundary at resolution eps.
        """
        x = space.check_point(x)
        for part in self.parts:
            if part.interior_classify(space, x, eps, tol).is_interior:
                return InteriorStatus.interior()
        if not self.contains(space, x, tol):
            return InteriorStatus.not_interior(x.copy())
        probes = []
        for i in range(self.dim):
            e_i = _axis_unit(self.dim, i)
            probes.append(x + eps * e_i)
            probes.append(x - eps * e_i)
        rng = np.random.default_rng([_UNION_PROBE_SEED, self.dim])
        dirs = rng.standard_normal((_UNION_RANDOM_PROBES, self.dim))
        dirs /= np.asarray(space.norm(dirs))[:, None]
        probes.extend(x + eps * u for u in dirs)
        return _classify_by_probes(self, space, x, probes, tol)


def contains(space: Space, shape: Shape, x, tol: float = MEMBERSHIP_TOL):
    return shape.contains(space, x, tol)


def interior_classify(space: Space, shape: Shape, x, eps: float = INTERIOR_EPS, tol: float = MEMBERSHIP_TOL) -> InteriorStatus:
    return shape.interior_classify(space, x, eps, tol)


def image(shape: Shape, motion: Motion) -> Shape:
    return shape.transform(motion)

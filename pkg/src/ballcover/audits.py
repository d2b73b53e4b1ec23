"""Deterministic sampling audits for coverings.

All audits fix the ambient set to the covering's own ball (the constructors
use the closed unit ball at the origin; other balls only arrive via user
files).  Reports are byte-stable: sampling streams depend on (seed, purpose,
block) only, reductions are order-independent, and worker counts change
runtime, never output.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .coverings import Covering
from .motions import motion_audit
from .reports import AuditReport, make_report
from .shapes import InteriorStatus, Shape
from .spaces import (
    BATCH_SIZE,
    Space,
    _ball_block,
    batch_rng,
    iter_batches,
    sample_ball_batch,
)

__all__ = [
    "AntipodalResult",
    "CenterClassification",
    "CoverageGapError",
    "DichotomyReport",
    "antipodal_search",
    "check_congruence",
    "check_coverage",
    "classify_center",
    "counterexample_r2_32",
    "dichotomy_audit",
    "sample_members",
]

_TAG_MEMBER = 613
_TAG_GRID = 701

# sample_members draws at most this many candidate ball points per requested
# member before failing loudly (supports volume fractions down to ~1/800).
MEMBER_DRAW_CAP = 800


def _run_blocks(fn, blocks, workers: int):
    if workers > 1 and len(blocks) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(fn, blocks))
    return [fn(block) for block in blocks]


def check_coverage(cov: Covering, samples: int, seed: int, tol: float = 1e-9, workers: int = 1) -> AuditReport:
    """Audit that sampled ball points land in some covering set.

    Points are uniform in the covering's ball.  For the universal
    construction, which deliberately does not claim finite coverage, the
    analytic per-point witness is consulted instead: the check becomes
    ||x - x/(2||x||)|| <= ball.radius/2 + tol.  Failures count uncovered
    samples; residual_max is the deepest uncovered gap (0 when none).
    """
    t0 = time.perf_counter()
    space, ball = cov.space, cov.ball
    witness_mode = cov.meta.get("kind") == "universal"
    blocks = list(iter_batches(samples))

    def run(block):
        b, start, count = block
        pts = sample_ball_batch(space, ball.center, ball.radius, seed, b, count)
        if witness_mode:
            # ||x - y_x|| = | ||x - c|| - r/2 | exactly, including the centre.
            gap = np.abs(np.asarray(space.norm(pts - ball.center)) - 0.5 * ball.radius)
            defect = gap - 0.5 * ball.radius
            bad = np.nonzero(defect > tol)[0]
            residual = float(defect[bad].max()) if bad.size else 0.0
        else:
            covered = np.zeros(count, dtype=bool)
            for s in cov.sets:
                todo = ~covered
                if not np.any(todo):
                    break
                covered[todo] = s.contains(space, pts[todo], tol)
            bad = np.nonzero(~covered)[0]
            residual = 0.0
            if bad.size:
                gaps = cov.sets[0].defect(space, pts[bad])
                for s in cov.sets[1:]:
                    gaps = np.minimum(gaps, s.defect(space, pts[bad]))
                residual = float(gaps.max())
        pairs = [(start + int(i), pts[i].copy()) for i in bad[:16]]
        return pairs, int(bad.size), residual

    failure_points: list[tuple[int, np.ndarray]] = []
    failures = 0
    residual_max = 0.0
    for pairs, cnt, res in _run_blocks(run, blocks, workers):
        failure_points.extend(pairs)
        failures += cnt
        residual_max = max(residual_max, res)
    runtime_ms = (time.perf_counter() - t0) * 1e3
    return make_report("coverage", samples, seed, failure_points, failures, residual_max, runtime_ms)


def sample_members(cov: Covering, shapes: list[Shape], count: int, seed: int, tol: float = 1e-9) -> list[np.ndarray]:
    """First ``count`` members of each shape along a shared deterministic ball stream.

    Rejection from the covering ball; raises RuntimeError when a shape's
    volume fraction is too small to fill its quota within the draw budget.
    """
    space, ball = cov.space, cov.ball
    collected: list[list[np.ndarray]] = [[] for _ in shapes]
    have = [0] * len(shapes)
    max_batches = max(64, -(-MEMBER_DRAW_CAP * count // BATCH_SIZE))
    for b in range(max_batches):
        if all(h >= count for h in have):
            break
        rng = batch_rng(seed, _TAG_MEMBER, b)
        pts = ball.center + ball.radius * _ball_block(space, rng, BATCH_SIZE)
        for i, shape in enumerate(shapes):
            if have[i] >= count:
                continue
            hit = pts[shape.contains(space, pts, tol)]
            take = hit[: count - have[i]]
            if take.size:
                collected[i].append(take)
                have[i] += take.shape[0]
    short = [i for i, h in enumerate(have) if h < count]
    if short:
        raise RuntimeError(
            f"could not sample {count} members for set(s) {short} within "
            f"{MEMBER_DRAW_CAP} draws per member; the sets are too small "
            "relative to the ball"
        )
    return [np.concatenate(parts, axis=0) for parts in collected]


def check_congruence(cov: Covering, samples: int = 1000, seed: int = 0, tol: float = 1e-9, workers: int = 1) -> AuditReport:
    """Audit the congruence witnesses of a covering.

    For each set i: ``samples`` members of sets[0] are pushed through
    witnesses[i] and must land in sets[i] and inside the ambient ball;
    ``samples`` members of sets[i] are pulled back and must land in sets[0];
    and the witness motion itself is audited (isometry, sphere preservation,
    linearity, inner-product preservation where applicable).  The report's
    ``samples`` field counts the transported points (2 * samples * set count).
    """
    if cov.witnesses is None:
        raise ValueError("covering has no congruence witnesses to audit")
    t0 = time.perf_counter()
    space, ball = cov.space, cov.ball
    members = sample_members(cov, list(cov.sets), samples, seed, tol)
    template_members = members[0]
    template = cov.sets[0]

    def run(i: int):
        w = cov.witnesses[i]
        forward = w.apply(template_members)
        d_fwd = np.asarray(cov.sets[i].defect(space, forward))
        d_ball = np.asarray(space.norm(forward - ball.center)) - ball.radius
        fwd_bad = np.nonzero((d_fwd > tol) | (d_ball > tol))[0]

        back = w.inverse().apply(members[i])
        d_back = np.asarray(template.defect(space, back))
        back_bad = np.nonzero(d_back > tol)[0]

        audit = motion_audit(space, w, 256, seed=i, tol=tol)

        base = i * 2 * samples
        pairs = [(base + int(j), forward[j].copy()) for j in fwd_bad[:16]]
        pairs += [(base + samples + int(j), members[i][j].copy()) for j in back_bad[:16]]
        pairs += [(base + 2 * samples - 1, np.asarray(pt)) for pt in audit.witnesses[:2]]
        failures = int(fwd_bad.size) + int(back_bad.size) + audit.failures
        residual = max(
            float(d_fwd.max(initial=0.0)),
            float(d_ball.max(initial=0.0)),
            float(d_back.max(initial=0.0)),
            audit.residual_max,
        )
        return pairs, failures, residual

    failure_points: list[tuple[int, np.ndarray]] = []
    failures = 0
    residual_max = 0.0
    for pairs, cnt, res in _run_blocks(run, list(range(cov.count)), workers):
        failure_points.extend(pairs)
        failures += cnt
        residual_max = max(residual_max, res)
    runtime_ms = (time.perf_counter() - t0) * 1e3
    return make_report(
        "congruence", 2 * samples * cov.count, seed, failure_points, failures, residual_max, runtime_ms
    )


@dataclass(frozen=True, eq=False)
class CenterClassification:
    """Interior status of the ball centre relative to every covering set.

    Boundary verdicts count as not-interior for the overall kind but are
    listed separately rather than silently folded in.
    """

    kind: str  # "in_all_interiors" | "in_no_interior" | "mixed"
    statuses: tuple[InteriorStatus, ...]
    interior_indices: tuple[int, ...]
    boundary_indices: tuple[int, ...]

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "set_count": len(self.statuses),
            "interior_indices": list(self.interior_indices),
            "boundary_indices": list(self.boundary_indices),
            "statuses": [s.kind for s in self.statuses],
        }

    def summary(self) -> str:
        return (
            f"{self.kind}  interior={list(self.interior_indices)}  "
            f"boundary={list(self.boundary_indices)}  sets={len(self.statuses)}"
        )


def classify_center(cov: Covering, eps: float = 1e-6, tol: float = 1e-9) -> CenterClassification:
    """Classify the ball centre against each set's interior at resolution eps."""
    c = cov.ball.center
    statuses = tuple(s.interior_classify(cov.space, c, eps, tol) for s in cov.sets)
    interior = tuple(i for i, s in enumerate(statuses) if s.is_interior)
    boundary = tuple(i for i, s in enumerate(statuses) if s.is_boundary)
    if len(interior) == len(statuses):
        kind = "in_all_interiors"
    elif not interior:
        kind = "in_no_interior"
    else:
        kind = "mixed"
    return CenterClassification(kind, statuses, interior, boundary)


@dataclass(frozen=True, eq=False)
class DichotomyReport:
    """Outcome of the centre dichotomy audit.

    When applicable, a congruent covering of the ball in a strictly convex
    norm with at most dim sets must place the centre in all interiors or in
    none; a "mixed" classification is a failure.  When a hypothesis is
    missing, the verdict is "not applicable" and the observed classification
    is still reported.
    """

    applicable: bool
    reason: str | None
    classification: CenterClassification
    verdict: str  # "pass" | "fail" | "not applicable"

    def to_dict(self) -> dict:
        return {
            "kind": "dichotomy",
            "verdict": self.verdict,
            "applicable": self.applicable,
            "reason": self.reason,
            "classification": self.classification.to_dict(),
        }

    def summary(self) -> str:
        if self.applicable:
            return f"dichotomy: {self.verdict}  classification={self.classification.kind}"
        return (
            f"dichotomy: not applicable ({self.reason})  "
            f"observed classification={self.classification.kind}"
        )


def dichotomy_audit(
    cov: Covering,
    eps: float = 1e-6,
    tol: float = 1e-9,
    witness_samples: int = 256,
) -> DichotomyReport:
    """Check the interior dichotomy of the ball centre where its hypotheses hold.

    Applicability requires a strictly convex norm, set count <= dimension,
    a claim of full-ball coverage (finite universal subfamilies make none),
    and witnesses that pass their motion audits.  The coverage and containment
    claims themselves are the coverage/congruence audits' job; a lying file
    earns a "fail" verdict here rather than a silent pass.
    """
    classification = classify_center(cov, eps, tol)
    reason = None
    if not cov.space.is_strictly_convex:
        reason = f"non-NCS norm (p={cov.space.p})"
    elif cov.count > cov.space.dim:
        reason = f"set count {cov.count} exceeds dimension {cov.space.dim}"
    elif not cov.claims_ball_coverage():
        reason = "finite subfamily does not claim ball coverage"
    elif cov.witnesses is None:
        reason = "no congruence witnesses"
    else:
        for i, w in enumerate(cov.witnesses):
            if motion_audit(cov.space, w, witness_samples, seed=i, tol=tol).verdict != "pass":
                reason = f"witness audit failed for set {i}"
                break
    if reason is not None:
        return DichotomyReport(False, reason, classification, "not applicable")
    verdict = "fail" if classification.kind == "mixed" else "pass"
    return DichotomyReport(True, None, classification, verdict)


class CoverageGapError(RuntimeError):
    """A probe point of the sphere lay in no set during antipodal search."""

    def __init__(self, point: np.ndarray, defect: float):
        super().__init__(
            f"sphere probe {point.tolist()} lies in no set (best defect {defect:.3g})"
        )
        self.point = point
        self.defect = defect


@dataclass(frozen=True, eq=False)
class AntipodalResult:
    """Best antipodal pair candidate: ``point`` and its reflection through the
    sphere centre, scored by the larger of the two membership defects."""

    set_index: int
    point: np.ndarray
    antipode: np.ndarray
    residual: float
    converged: bool

    def to_dict(self) -> dict:
        return {
            "kind": "antipodal",
            "set_index": int(self.set_index),
            "point": [float(v) for v in self.point],
            "antipode": [float(v) for v in self.antipode],
            "residual": float(self.residual),
            "converged": bool(self.converged),
        }

    def summary(self) -> str:
        state = "converged" if self.converged else "NOT converged"
        return (
            f"antipodal: set {self.set_index}  residual={self.residual:.3g}  "
            f"({state})  point={np.round(self.point, 6).tolist()}"
        )


def _sphere_grid(space: Space, center: np.ndarray, radius: float, grid: int, seed: int) -> np.ndarray:
    if space.dim == 2:
        rng = batch_rng(seed, _TAG_GRID, 0)
        offset = rng.uniform(0.0, 2.0 * math.pi / grid)
        theta = offset + 2.0 * math.pi * np.arange(grid) / grid
        dirs = np.stack([np.cos(theta), np.sin(theta)], axis=1)
    else:
        dirs = np.empty((grid, space.dim))
        for b, start, count in iter_batches(grid):
            g = batch_rng(seed, _TAG_GRID, b).standard_normal((count, space.dim))
            dirs[start : start + count] = g
    dirs = dirs / np.asarray(space.norm(dirs))[:, None]
    return center + radius * dirs


def antipodal_search(
    space: Space,
    sets: list[Shape],
    center=None,
    radius: float = 1.0,
    grid: int = 512,
    refine_iters: int = 32,
    tol: float = 1e-6,
    seed: int = 0,
) -> AntipodalResult:
    """Search closed sets covering the sphere S(center, radius) for an
    antipodal pair inside a single set.

    With at most ``dim`` closed sets covering the sphere such a pair must
    exist.  The search scores x by max(defect_i(x), defect_i(-x)) over a
    seeded sphere grid, then refines the best candidate coordinate-wise with
    shrinking steps (projecting back to the sphere).  Raises
    CoverageGapError if some grid point lies in no set; a residual above tol
    is reported via ``converged=False``, never hidden.
    """
    if len(sets) == 0:
        raise ValueError("need at least one set")
    if space.dim < len(sets):
        raise ValueError(
            f"the antipodal guarantee needs dim >= set count, got dim={space.dim} "
            f"and {len(sets)} sets"
        )
    if grid < 8:
        raise ValueError("grid must be at least 8")
    center = np.zeros(space.dim) if center is None else space.check_point(center)
    radius = float(radius)

    pts = _sphere_grid(space, center, radius, grid, seed)
    anti = 2.0 * center - pts
    defects = np.stack([np.asarray(s.defect(space, pts)) for s in sets])
    defects_anti = np.stack([np.asarray(s.defect(space, anti)) for s in sets])

    gap = defects.min(axis=0)
    worst = int(np.argmax(gap))
    if gap[worst] > max(tol, 1e-9):
        raise CoverageGapError(pts[worst], float(gap[worst]))

    objective = np.maximum(defects, defects_anti)  # (sets, grid)
    flat = int(np.argmin(objective))
    best_i, best_j = divmod(flat, grid)
    best_x = pts[best_j].copy()
    best_val = float(objective[best_i, best_j])

    def score(x):
        vals = [
            max(float(s.defect(space, x)), float(s.defect(space, 2.0 * center - x)))
            for s in sets
        ]
        i = int(np.argmin(vals))
        return vals[i], i

    def poll(x, val, i, step):
        # best of the 2*dim coordinate moves, projected back to the sphere
        for j in range(space.dim):
            for sgn in (1.0, -1.0):
                cand = x.copy()
                cand[j] += sgn * step
                v = cand - center
                n = float(space.norm(v))
                if n == 0.0:
                    continue
                cand = center + (radius / n) * v
                cval, ci = score(cand)
                if cval < val:
                    val, i, x = cval, ci, cand
        return x, val, i

    # compass search: up to 64 improving polls per step level, then halve;
    # the cap bounds per-level churn from sub-step-size improvements
    step = radius * math.pi / max(grid, 8)
    for _ in range(max(0, refine_iters)):
        for _ in range(64):
            nx, nval, ni = poll(best_x, best_val, best_i, step)
            if nval >= best_val:
                break
            best_x, best_val, best_i = nx, nval, ni
        step *= 0.5
    residual = max(best_val, 0.0)
    return AntipodalResult(
        best_i, best_x, 2.0 * center - best_x, residual, residual <= tol
    )


def counterexample_r2_32() -> tuple[float, float]:
    """Evaluate a four-point norm inequality in the p = 3/2 plane.

    For x = (1,0), y = (0,1), z = (1,1) it returns
    lhs = ||x-y||^2 + ||z||^2 and rhs = ||x||^2 + ||y||^2 + ||x-z||^2 + ||y-z||^2.
    Under any inner-product norm lhs <= rhs; here lhs = 4 * 2^(1/3) > 4 = rhs,
    so the p = 3/2 norm admits no compatible inner product.
    """
    space = Space(2, 1.5)
    x = np.array([1.0, 0.0])
    y = np.array([0.0, 1.0])
    z = np.array([1.0, 1.0])
    lhs = float(space.norm(x - y)) ** 2 + float(space.norm(z)) ** 2
    rhs = (
        float(space.norm(x)) ** 2
        + float(space.norm(y)) ** 2
        + float(space.norm(x - z)) ** 2
        + float(space.norm(y - z)) ** 2
    )
    return lhs, rhs

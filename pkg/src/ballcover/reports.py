"""Audit report container with a canonical, byte-stable JSON form."""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

__all__ = ["MAX_WITNESSES", "AuditReport", "make_report"]

MAX_WITNESSES = 16


@dataclass(frozen=True, eq=False)
class AuditReport:
    """Outcome of one deterministic sampling audit.

    ``failures == 0`` iff ``verdict == "pass"``, and ``witnesses`` (the first
    failing sample points, by sample index) is non-empty iff failures > 0.
    ``runtime_ms`` is measured wall time; it is deliberately serialized as 0 so
    that reports for identical (input, seed, parameters) are byte-identical
    regardless of worker count or machine load.  Read the measured value off
    the object itself.
    """

    kind: str
    samples: int
    seed: int
    failures: int
    witnesses: tuple[tuple[float, ...], ...]
    residual_max: float
    verdict: str
    runtime_ms: float = 0.0

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "verdict": self.verdict,
            "samples": int(self.samples),
            "seed": int(self.seed),
            "failures": int(self.failures),
            "residual_max": float(self.residual_max),
            "witnesses": [list(w) for w in self.witnesses],
            "runtime_ms": 0,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    def summary(self) -> str:
        return (
            f"{self.kind}: {self.verdict}  failures={self.failures}/{self.samples}  "
            f"residual_max={self.residual_max:.3g}  seed={self.seed}  "
            f"({self.runtime_ms:.0f} ms)"
        )


def make_report(
    kind: str,
    samples: int,
    seed: int,
    failure_points: list[tuple[int, np.ndarray]],
    failures: int,
    residual_max: float,
    runtime_ms: float,
) -> AuditReport:
    """Assemble a report from per-failure (sample index, point) pairs.

    ``failure_points`` may be a subset of all failures (collection is capped);
    ``failures`` is the full count.  Witnesses are the first MAX_WITNESSES
    failing points ordered by sample index, which keeps the report independent
    of how sample blocks were scheduled.
    """
    ordered = sorted(failure_points, key=lambda item: item[0])[:MAX_WITNESSES]
    witnesses = tuple(tuple(float(v) for v in pt) for _idx, pt in ordered)
    if failures > 0 and not witnesses:
        raise ValueError("a failing audit must record at least one witness point")
    if failures == 0 and witnesses:
        raise ValueError("a passing audit must not record witness points")
    return AuditReport(
        kind=kind,
        samples=int(samples),
        seed=int(seed),
        failures=int(failures),
        witnesses=witnesses,
        residual_max=float(residual_max),
        verdict="pass" if failures == 0 else "fail",
        runtime_ms=float(runtime_ms),
    )

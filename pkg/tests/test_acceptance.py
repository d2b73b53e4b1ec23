"""Acceptance suite: one test per criterion, at full stated scale and tolerance.

Each test prints a single ``[acceptance] criterion N: PASS|FAIL`` line so the
suite can be skimmed from the pytest output (run with ``-s`` or read captured
stdout of failures).
"""

import math
import time

import numpy as np

from ballcover.audits import (
    antipodal_search,
    check_congruence,
    check_coverage,
    classify_center,
    counterexample_r2_32,
    dichotomy_audit,
    sample_members,
)
from ballcover.cli import main
from ballcover.coverings import (
    halfball_covering,
    ommatidium_covering,
    slab_covering,
    universal_covering,
)
from ballcover.motions import (
    compose,
    motion_audit,
    planar_rotation_between,
    scale_linear_part,
    translation,
)
from ballcover.shapes import Ommatidium
from ballcover.spaces import Space, ncs_violation_search, sample_ball, sample_sphere


def _report(n: int, ok: bool) -> None:
    print(f"[acceptance] criterion {n}: {'PASS' if ok else 'FAIL'}")


def test_criterion_1_counterexample_exactness():
    ok = False
    try:
        counterexample_r2_32()  # warm
        t0 = time.perf_counter()
        lhs, rhs = counterexample_r2_32()
        elapsed = time.perf_counter() - t0
        assert abs(lhs - 4.0 * 2.0 ** (1.0 / 3.0)) <= 1e-12
        assert rhs == 4.0
        assert lhs > rhs
        assert elapsed < 0.010, f"took {elapsed * 1e3:.2f} ms"
        ok = True
    finally:
        _report(1, ok)


def test_criterion_2_slab_coverings():
    ok = False
    try:
        for n in (3, 5, 7):
            t0 = time.perf_counter()
            cov = slab_covering(n, n)
            coverage = check_coverage(cov, 100_000, seed=7)
            assert coverage.failures == 0, f"n={n}: {coverage.failures} uncovered"
            cls = classify_center(cov)
            assert cls.kind == "mixed"
            assert cls.interior_indices == (n // 2,)  # 0-based middle slab
            congruence = check_congruence(cov, samples=1000, seed=7)
            assert congruence.verdict == "pass"
            assert congruence.residual_max <= 1e-9
            elapsed = time.perf_counter() - t0
            assert elapsed < 5.0, f"n={n} took {elapsed:.1f} s"
        ok = True
    finally:
        _report(2, ok)


def test_criterion_3_ommatidium_coverings():
    ok = False
    try:
        pair_rng_tag = 20260825
        for dim in (2, 3, 4):
            t0 = time.perf_counter()
            cov = ommatidium_covering(dim, math.pi / 4, seed=11)
            coverage = check_coverage(cov, 100_000, seed=5)
            assert coverage.failures == 0, f"dim={dim}: {coverage.failures} uncovered"

            cls = classify_center(cov)
            assert cls.interior_indices == (0,), f"dim={dim}: centre interior to {cls.interior_indices}"

            members = sample_members(cov, list(cov.sets), 2000, seed=5)
            for i, (shape, pts) in enumerate(zip(cov.sets, members)):
                # in-ball containment of sampled members
                assert float(np.asarray(cov.space.norm(pts)).max()) <= 1.0 + 1e-9
                # convexity along 10^4 random member chords
                rng = np.random.default_rng([pair_rng_tag, dim, i])
                a = pts[rng.integers(0, len(pts), 10_000)]
                b = pts[rng.integers(0, len(pts), 10_000)]
                t = rng.uniform(0.0, 1.0, (10_000, 1))
                mids = t * a + (1.0 - t) * b
                worst = float(np.asarray(shape.defect(cov.space, mids)).max())
                assert worst <= 1e-9, f"dim={dim} set {i}: chord defect {worst:.3g}"

            congruence = check_congruence(cov, samples=1000, seed=5)
            assert congruence.verdict == "pass"
            assert congruence.residual_max <= 1e-9
            elapsed = time.perf_counter() - t0
            if dim == 4:
                assert elapsed < 30.0, f"dim=4 took {elapsed:.1f} s"
        ok = True
    finally:
        _report(3, ok)


def test_criterion_4_boundary_sector_identity():
    ok = False
    try:
        gamma = math.acos(0.25)
        d = np.array([1.0, 0.0, 0.0])
        sector = Ommatidium(-0.5 * d, 0.5 * d, gamma)
        space = Space(3, 2.0)
        rng = np.random.default_rng(20260825)
        beta = rng.uniform(0.0, gamma, 10_000)
        raw = rng.standard_normal((10_000, 3))
        raw[:, 0] = 0.0  # orthogonal to d
        u = raw / np.linalg.norm(raw, axis=1, keepdims=True)
        x = -0.5 * d + np.cos(beta)[:, None] * d + np.sin(beta)[:, None] * u
        norms_sq = np.sum(x * x, axis=1)
        assert float(np.abs(norms_sq - (1.25 - np.cos(beta))).max()) <= 1e-9
        assert float(np.sqrt(norms_sq).max()) <= 1.0 + 1e-9
        assert bool(np.all(sector.contains(space, x)))
        ok = True
    finally:
        _report(4, ok)


def test_criterion_5_dichotomy_audit():
    ok = False
    try:
        for dim in (2, 3, 8):
            rep = dichotomy_audit(halfball_covering(dim))
            assert rep.applicable and rep.verdict == "pass"
            assert rep.classification.kind == "in_no_interior"
        for n in (3, 5, 7):
            rep = dichotomy_audit(slab_covering(n, n))
            assert not rep.applicable
            assert "non-NCS" in rep.reason
            assert rep.classification.kind == "mixed"
        builtins = (
            [halfball_covering(d) for d in (2, 3, 8)]
            + [slab_covering(n, n) for n in (3, 5, 7)]
            + [universal_covering(3, 6, seed=2), universal_covering(3, 1, seed=2)]
            + [ommatidium_covering(d, math.pi / 4, seed=11) for d in (2, 3)]
        )
        for cov in builtins:
            rep = dichotomy_audit(cov)
            assert not (rep.applicable and rep.classification.kind == "mixed"), cov.meta
            assert rep.verdict != "fail"
        ok = True
    finally:
        _report(5, ok)


def test_criterion_6_antipodal_search():
    ok = False
    try:
        space = Space(2, 2.0)

        def arc(start_deg, end_deg):
            mid = math.radians(0.5 * (start_deg + end_deg))
            return Ommatidium(
                np.zeros(2),
                np.array([math.cos(mid), math.sin(mid)]),
                math.radians(0.5 * (end_deg - start_deg)),
            )

        arcs = [arc(0.0, 200.0), arc(180.0, 360.0)]
        res = antipodal_search(space, arcs, grid=720, refine_iters=40, tol=1e-6, seed=3)
        assert res.set_index == 0  # the 200-degree arc holds the pair
        assert res.residual <= 1e-6

        # 0.1-degree exhaustive sweep as the independent oracle
        theta = np.radians(np.arange(0.0, 360.0, 0.1))
        pts = np.stack([np.cos(theta), np.sin(theta)], axis=1)
        objective = np.minimum(
            *[
                np.maximum(np.asarray(a.defect(space, pts)), np.asarray(a.defect(space, -pts)))
                for a in arcs
            ]
        )
        oracle_best = float(objective.min())
        assert res.residual <= max(oracle_best, 0.0) + 1e-9

        caps = [
            Ommatidium(
                np.zeros(3),
                np.array([math.cos(2.0 * math.pi * k / 3.0), math.sin(2.0 * math.pi * k / 3.0), 0.0]),
                math.radians(100.0),
            )
            for k in range(3)
        ]
        t0 = time.perf_counter()
        res3 = antipodal_search(Space(3, 2.0), caps, grid=4096, refine_iters=48, tol=1e-3, seed=7)
        elapsed = time.perf_counter() - t0
        assert res3.residual <= 1e-3
        assert elapsed < 10.0, f"took {elapsed:.1f} s"
        ok = True
    finally:
        _report(6, ok)


def test_criterion_7_motion_audits():
    ok = False
    try:
        population = []
        for cov in (
            slab_covering(5, 5),
            halfball_covering(3),
            ommatidium_covering(3, math.pi / 4, seed=11),
            universal_covering(3, 6, seed=2),
        ):
            population.extend((cov.space, w) for w in cov.witnesses)
        e3 = Space(3, 2.0)
        dirs = sample_sphere(e3, 4, seed=13)
        rots = [planar_rotation_between(dirs[0], dirs[i]) for i in range(1, 4)]
        population.extend((e3, m) for m in rots)
        population.append((e3, compose(rots[0], compose(rots[1], translation(dirs[2])))))

        for space, m in population:
            rep = motion_audit(space, m, 10_000, seed=17)
            assert rep.verdict == "pass" and rep.residual_max <= 1e-9, m

        bad = scale_linear_part(rots[0], 1.01)
        rep = motion_audit(e3, bad, 10_000, seed=17)
        assert rep.verdict == "fail"
        assert rep.residual_max >= 1e-3
        ok = True
    finally:
        _report(7, ok)


def test_criterion_8_ncs_audit():
    ok = False
    try:
        for dim in (2, 5):
            for p in (1.0, math.inf):
                t0 = time.perf_counter()
                w = ncs_violation_search(Space(dim, p), 100_000, seed=4)
                elapsed = time.perf_counter() - t0
                assert w is not None, f"p={p} dim={dim}: no violation found"
                space = Space(dim, p)
                assert abs(float(space.norm(w.x)) - 1.0) <= 1e-9
                assert abs(float(space.norm(w.y)) - 1.0) <= 1e-9
                combo = w.lam * w.x + (1.0 - w.lam) * w.y
                assert abs(float(space.norm(combo)) - 1.0) <= 1e-9
                assert elapsed < 2.0
            for p in (1.5, 2.0, 3.0):
                t0 = time.perf_counter()
                w = ncs_violation_search(Space(dim, p), 100_000, seed=4)
                elapsed = time.perf_counter() - t0
                assert w is None, f"p={p} dim={dim}: spurious witness"
                assert elapsed < 2.0, f"p={p} dim={dim} took {elapsed:.2f} s"
        ok = True
    finally:
        _report(8, ok)


def test_criterion_9_universal_covering():
    ok = False
    try:
        cov = universal_covering(3, 6, seed=2)
        rep = check_coverage(cov, 100_000, seed=9, tol=1e-12)
        assert rep.failures == 0

        # independent route: explicit witness deviation on a fresh sample
        space = cov.space
        pts = sample_ball(space, np.zeros(3), 1.0, 100_000, seed=31)
        norms = np.asarray(space.norm(pts))
        nz = norms > 0.0
        w = pts[nz] * (0.5 / norms[nz])[:, None]
        dev = np.asarray(space.norm(pts[nz] - w))
        assert float(dev.max()) <= 0.5 + 1e-12

        cls = classify_center(cov)
        assert cls.interior_indices == (0,)
        ok = True
    finally:
        _report(9, ok)


def test_criterion_10_worker_determinism(tmp_path):
    ok = False
    try:
        slab = slab_covering(5, 5)
        omm = ommatidium_covering(3, math.pi / 4, seed=11)
        uni = universal_covering(3, 6, seed=2)
        for cov in (slab, omm, uni):
            a = check_coverage(cov, 100_000, seed=3, workers=1)
            b = check_coverage(cov, 100_000, seed=3, workers=4)
            assert a.to_json() == b.to_json()
            a = check_congruence(cov, samples=500, seed=3, workers=1)
            b = check_congruence(cov, samples=500, seed=3, workers=4)
            assert a.to_json() == b.to_json()
        m = omm.witnesses[3]
        assert (
            motion_audit(omm.space, m, 100_000, seed=3, workers=1).to_json()
            == motion_audit(omm.space, m, 100_000, seed=3, workers=4).to_json()
        )

        cov_path = tmp_path / "omm.json"
        assert main(["construct", "--kind", "ommatidium", "--dim", "3", "--seed", "11", "--out", str(cov_path)]) == 0
        p1, p4 = tmp_path / "w1.json", tmp_path / "w4.json"
        assert main(["verify", str(cov_path), "--samples", "100000", "--seed", "3", "--workers", "1", "--json", str(p1)]) == 0
        assert main(["verify", str(cov_path), "--samples", "100000", "--seed", "3", "--workers", "4", "--json", str(p4)]) == 0
        assert p1.read_bytes() == p4.read_bytes()
        ok = True
    finally:
        _report(10, ok)

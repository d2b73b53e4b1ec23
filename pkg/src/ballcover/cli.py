"""Command-line surface: construct coverings, run audits, emit reports and figures.

Exit codes: 0 on pass/success, 1 on audit failure, 2 on usage or file errors.
All randomized commands require an explicit ``--seed``; reports are
byte-stable for a fixed seed regardless of ``--workers``.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys

from .audits import (
    CoverageGapError,
    antipodal_search,
    check_congruence,
    check_coverage,
    classify_center,
    counterexample_r2_32,
    dichotomy_audit,
)
from .coverings import (
    halfball_covering,
    ommatidium_covering,
    slab_covering,
    universal_covering,
)
from .serialization import SerializationError, load_covering, save_covering
from .spaces import Space, ncs_violation_search

__all__ = ["main"]


def _parse_p(text: str) -> float:
    p = float(text)
    if p < 1.0:
        raise argparse.ArgumentTypeError("p must be >= 1 (or inf)")
    return p


def _write_json(path: str, payload) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")


def _cmd_construct(args) -> int:
    if args.kind == "slab":
        if args.n is None:
            raise ValueError("--kind slab requires --n (odd slab count)")
        cov = slab_covering(args.n, args.dim)
    elif args.kind == "universal":
        cov = universal_covering(args.dim, args.k, args.seed, p=args.p)
    elif args.kind == "ommatidium":
        cov = ommatidium_covering(args.dim, args.beta, args.seed)
    else:  # halfball
        cov = halfball_covering(args.dim)
    save_covering(cov, args.out)
    print(f"wrote {args.kind} covering: dim={cov.space.dim} sets={cov.count} -> {args.out}")
    return 0


def _cmd_verify(args) -> int:
    cov = load_covering(args.file)
    if cov.meta.get("kind") == "universal":
        print("coverage uses the analytic per-point witness (universal covering)")
    reports = [check_coverage(cov, args.samples, args.seed, args.tol, args.workers)]
    if cov.witnesses is not None:
        reports.append(
            check_congruence(cov, args.member_samples, args.seed, args.tol, args.workers)
        )
    else:
        print("no witnesses stored; skipping congruence audit")
    for report in reports:
        print(report.summary())
    if args.json:
        _write_json(args.json, [r.to_dict() for r in reports])
    if args.csv:
        with open(args.csv, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["kind", "verdict", "samples", "seed", "failures", "residual_max"])
            for r in reports:
                writer.writerow([r.kind, r.verdict, r.samples, r.seed, r.failures, r.residual_max])
    if args.figure:
        from .plotting import render_covering

        witnesses = [w for r in reports for w in r.witnesses]
        render_covering(cov, args.figure, highlight=witnesses or None)
        print(f"figure -> {args.figure}")
    return 1 if any(r.verdict != "pass" for r in reports) else 0


def _cmd_classify_center(args) -> int:
    cov = load_covering(args.file)
    cls = classify_center(cov, args.eps)
    print("center classification: " + cls.summary())
    if args.json:
        _write_json(args.json, cls.to_dict())
    return 0


def _cmd_dichotomy(args) -> int:
    cov = load_covering(args.file)
    report = dichotomy_audit(cov, args.eps)
    print(report.summary())
    if args.json:
        _write_json(args.json, report.to_dict())
    return 1 if report.verdict == "fail" else 0


def _cmd_antipodal(args) -> int:
    cov = load_covering(args.file)
    result = antipodal_search(
        cov.space,
        list(cov.sets),
        cov.ball.center,
        cov.ball.radius,
        grid=args.grid,
        refine_iters=args.refine,
        tol=args.tol,
        seed=args.seed,
    )
    print(result.summary())
    if args.json:
        _write_json(args.json, result.to_dict())
    return 0 if result.converged else 1


def _cmd_ncs(args) -> int:
    space = Space(args.dim, args.p)
    witness = ncs_violation_search(space, args.samples, args.seed)
    p_label = "inf" if math.isinf(args.p) else args.p
    if witness is None:
        print(f"no strict-convexity violation found (p={p_label}, dim={args.dim}, samples={args.samples})")
    else:
        print(
            f"strict-convexity violation (p={p_label}): midpoint-norm 1 between distinct "
            f"unit vectors x={witness.x.tolist()} y={witness.y.tolist()} lam={witness.lam}"
        )
    if args.json:
        payload = {
            "kind": "ncs",
            "p": "inf" if math.isinf(args.p) else float(args.p),
            "dim": args.dim,
            "samples": args.samples,
            "seed": args.seed,
            "witness_found": witness is not None,
            "witness": None
            if witness is None
            else {
                "x": witness.x.tolist(),
                "y": witness.y.tolist(),
                "lam": float(witness.lam),
                "combination_norm": float(witness.combination_norm),
            },
        }
        _write_json(args.json, payload)
    return 0


def _cmd_counterexample(args) -> int:
    lhs, rhs = counterexample_r2_32()
    print(f"lhs={lhs} rhs={rhs} (lhs > rhs: {lhs > rhs})")
    return 0


def _cmd_plot(args) -> int:
    from .plotting import render_covering

    cov = load_covering(args.file)
    render_covering(cov, args.out, resolution=args.resolution)
    print(f"figure -> {args.out}")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ballcover",
        description="Construct ball coverings by congruent subsets and audit them numerically.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    c = sub.add_parser("construct", help="build a covering and write it to a JSON file")
    c.add_argument("--kind", required=True, choices=["slab", "universal", "ommatidium", "halfball"])
    c.add_argument("--dim", type=int, required=True, help="ambient dimension")
    c.add_argument("--n", type=int, default=None, help="slab count (slab kind; odd, <= dim)")
    c.add_argument("--beta", type=float, default=math.pi / 4, help="direction-net resolution (ommatidium kind)")
    c.add_argument("--k", type=int, default=6, help="number of sampled balls (universal kind)")
    c.add_argument("--p", type=_parse_p, default=2.0, help="norm exponent (universal kind; 'inf' allowed)")
    c.add_argument("--seed", type=int, required=True)
    c.add_argument("--out", required=True)
    c.set_defaults(func=_cmd_construct)

    v = sub.add_parser("verify", help="run the coverage and congruence audits on a covering file")
    v.add_argument("file")
    v.add_argument("--samples", type=int, required=True)
    v.add_argument("--seed", type=int, required=True)
    v.add_argument("--tol", type=float, default=1e-9)
    v.add_argument("--workers", type=int, default=1, help="thread count (affects runtime only)")
    v.add_argument("--member-samples", type=int, default=1000, help="members per set for the congruence audit")
    v.add_argument("--json", default=None, help="write the reports as a JSON array")
    v.add_argument("--csv", default=None, help="write one CSV row per report")
    v.add_argument("--figure", default=None, help="render the covering to this SVG (dim 2 only)")
    v.set_defaults(func=_cmd_verify)

    cc = sub.add_parser("classify-center", help="classify the ball centre against each set's interior")
    cc.add_argument("file")
    cc.add_argument("--eps", type=float, default=1e-6)
    cc.add_argument("--json", default=None)
    cc.set_defaults(func=_cmd_classify_center)

    d = sub.add_parser("dichotomy", help="audit the all-or-no-interiors centre dichotomy")
    d.add_argument("file")
    d.add_argument("--eps", type=float, default=1e-6)
    d.add_argument("--json", default=None)
    d.set_defaults(func=_cmd_dichotomy)

    a = sub.add_parser("antipodal", help="search the covering's sphere for an antipodal pair inside one set")
    a.add_argument("file")
    a.add_argument("--grid", type=int, default=512)
    a.add_argument("--refine", type=int, default=32)
    a.add_argument("--tol", type=float, default=1e-6)
    a.add_argument("--seed", type=int, required=True)
    a.add_argument("--json", default=None)
    a.set_defaults(func=_cmd_antipodal)

    n = sub.add_parser("ncs", help="search a norm for strict-convexity violations")
    n.add_argument("--p", type=_parse_p, required=True, help="norm exponent ('inf' allowed)")
    n.add_argument("--dim", type=int, required=True)
    n.add_argument("--samples", type=int, default=100000)
    n.add_argument("--seed", type=int, required=True)
    n.add_argument("--json", default=None)
    n.set_defaults(func=_cmd_ncs)

    x = sub.add_parser("counterexample", help="evaluate the inner-product inequality counterexample in the p=3/2 plane")
    x.set_defaults(func=_cmd_counterexample)

    pl = sub.add_parser("plot", help="render a dim-2 covering to SVG")
    pl.add_argument("file")
    pl.add_argument("--out", required=True)
    pl.add_argument("--resolution", type=int, default=512)
    pl.set_defaults(func=_cmd_plot)

    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CoverageGapError as exc:
        print(f"audit failure: {exc}", file=sys.stderr)
        return 1
    except (OSError, json.JSONDecodeError, SerializationError, ValueError, RuntimeError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

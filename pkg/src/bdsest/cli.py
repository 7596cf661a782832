"""Command-line entry point: ``bdsest {simulate,analytic,distinguish,bound}``."""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import asdict

from . import analytics
from .distinguish import optimal_povm
from .estimators import DEFAULT_RESOLUTION
from .harness import ESTIMATORS, LOSSES, ConfigError, ExperimentConfig, analytic_curve, emit_report, run_experiment
from .measurements import STRATEGIES


def _floats(text: str) -> tuple:
    try:
        return tuple(float(x) for x in text.replace(" ", "").split(",") if x)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _theta(text: str) -> tuple:
    vals = _floats(text)
    if len(vals) != 4:
        raise argparse.ArgumentTypeError("theta needs four comma-separated weights")
    return vals


def _seed_from_env():
    raw = os.environ.get("BDS_SEED")
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"BDS_SEED must be an integer, got {raw!r}") from None


def _write(data: bytes, out):
    if out in (None, "-"):
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    else:
        with open(out, "wb") as fh:
            fh.write(data)


def cmd_simulate(args) -> int:
    alpha = args.prior_alpha
    if len(alpha) == 1:
        alpha = alpha * 4
    seed = args.seed if args.seed is not None else _seed_from_env()
    config = ExperimentConfig(
        strategy=args.strategy, estimator=args.estimator, loss=args.loss, prior_alpha=alpha,
        n_values=tuple(args.n), samples=args.samples, grid_resolution=args.grid, seed=seed,
    )
    curve = run_experiment(config, workers=args.workers)
    _write(emit_report(curve, args.format), args.out)
    return 0


def cmd_analytic(args) -> int:
    points = analytic_curve(args.strategy, args.estimator, args.n)
    doc = {
        "strategy": args.strategy,
        "estimator": args.estimator,
        "points": [{"n": p.n, "value": p.value, "upper_bound": p.is_upper_bound} for p in points],
    }
    _write((json.dumps(doc, indent=2) + "\n").encode("utf-8"), args.out)
    return 0


def cmd_distinguish(args) -> int:
    result = optimal_povm(args.rho, args.phi)
    doc = asdict(result)
    doc["positive_indices"] = list(result.positive_indices)
    doc["negative_indices"] = list(result.negative_indices)
    _write((json.dumps(doc, indent=2) + "\n").encode("utf-8"), args.out)
    return 0


def cmd_bound(args) -> int:
    rows = []
    for n in args.n:
        if args.kind == "qcrb":
            if args.theta is None:
                raise ConfigError("--theta is required for the qcrb bound")
            rows.append({"n": n, "value": analytics.qcrb_bound(args.theta, n)})
        else:
            rows.append({"n": n, "value": analytics.bme_parity_upper_bound(n)})
    doc = {"kind": args.kind, "theta": list(args.theta) if args.theta else None, "points": rows}
    _write((json.dumps(doc, indent=2) + "\n").encode("utf-8"), args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bdsest", description="Bell diagonal state estimation toolkit")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="Monte Carlo average risk curve")
    p.add_argument("--strategy", required=True, choices=STRATEGIES)
    p.add_argument("--estimator", required=True, choices=ESTIMATORS)
    p.add_argument("--loss", default="hs", choices=LOSSES)
    p.add_argument("--prior-alpha", type=_floats, default=(1.0,),
                   help="Dirichlet concentration: one value (symmetric) or four comma-separated")
    p.add_argument("--n", type=int, action="append", required=True, help="shot count; repeatable")
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--grid", type=int, default=DEFAULT_RESOLUTION, help="grid resolution m")
    p.add_argument("--seed", type=int, default=None, help="defaults to $BDS_SEED, then 0")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--format", default="json", choices=("json", "csv"))
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("analytic", help="closed-form average risk curve")
    p.add_argument("--strategy", required=True, choices=STRATEGIES)
    p.add_argument("--estimator", required=True, choices=ESTIMATORS)
    p.add_argument("--n", type=int, action="append", required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_analytic)

    p = sub.add_parser("distinguish", help="Helstrom bound and LOCC optimality for two states")
    p.add_argument("--rho", type=_theta, required=True, help="four Bell-basis weights")
    p.add_argument("--phi", type=_theta, required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_distinguish)

    p = sub.add_parser("bound", help="QCRB or ordered-parity BME bound")
    p.add_argument("--kind", choices=("qcrb", "bme-parity"), required=True)
    p.add_argument("--theta", type=_theta, default=None)
    p.add_argument("--n", type=int, action="append", required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_bound)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    try:
        return args.func(args)
    except (ConfigError, ValueError) as exc:
        print(f"bdsest: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

"""Command-line entry points for grid synthesis, workloads, and sweeps.

Subcommands:
  gen-occupancy   synthesize a daily-repeating occupancy grid CSV
  gen-requests    draw a request batch and save it as CSV
  run             run the mechanisms once for a single (lambda, eta_s)
  sweep           cartesian sweep over lambda and eta_s lists

``run`` and ``sweep`` write the results CSV described in the README.
Timing is off by default so identical seeds give byte-identical output;
pass --timing to fill the runtime_ms column instead.
"""

from __future__ import annotations

import argparse
import logging
import sys
from math import sqrt

from .experiment import ExperimentPlan, run_experiment, write_results_csv
from .workload import (
    WorkloadSpec,
    generate_requests,
    load_occupancy,
    load_requests,
    save_occupancy,
    save_requests,
    synthesize_occupancy,
)


def _int_list(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x]


def _float_list(text: str) -> list[float]:
    return [float(x) for x in text.split(",") if x]


def _mechanisms(text: str) -> tuple[str, ...]:
    return tuple(x.strip() for x in text.split(",") if x.strip())


def _add_auction_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--beta", type=float, default=1.0 + sqrt(2.0),
                   help="preemption threshold factor (default 1+sqrt(2))")
    p.add_argument("--xi", type=float, default=0.01, help="bid granularity (default 0.01)")
    p.add_argument("--mechanisms", type=_mechanisms, default=("vcg", "pvg"),
                   help="comma list out of vcg,pvg (default both)")
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--seed", type=int, default=0, help="master seed")
    p.add_argument("--day", type=int, default=None,
                   help="slice this 24h day out of the grid before running")
    p.add_argument("--vcg-max-jobs", type=int, default=None,
                   help="override the exact-solver job cap")
    p.add_argument("--timing", action="store_true",
                   help="fill runtime_ms (breaks byte-identical reruns)")
    p.add_argument("--delta", type=float, default=0.8,
                   help="hot-time request fraction for set 2 (default 0.8)")
    p.add_argument("--out", required=True, help="results CSV path")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spectrum-auction",
        description="Truthful spectrum auction mechanisms and experiments",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-occupancy", help="synthesize an occupancy grid CSV")
    p.add_argument("--channels", type=int, required=True)
    p.add_argument("--days", type=int, default=5)
    p.add_argument("--duty-cycle", type=float, default=0.5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--slot-seconds", type=int, default=75)
    p.add_argument("--out", required=True)

    p = sub.add_parser("gen-requests", help="draw a request batch CSV")
    p.add_argument("--lambda", dest="lam", type=int, required=True,
                   help="number of requests")
    p.add_argument("--set", dest="set_kind", type=int, choices=(1, 2), default=1)
    p.add_argument("--delta", type=float, default=0.8)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--horizon", type=int, default=86_400)
    p.add_argument("--out", required=True)

    p = sub.add_parser("run", help="single-point run")
    p.add_argument("--grid", required=True, help="occupancy CSV path")
    p.add_argument("--requests", default=None, help="request CSV (skips generation)")
    p.add_argument("--lambda", dest="lam", type=int, default=None,
                   help="number of requests per trial (generator mode)")
    p.add_argument("--set", dest="set_kind", type=int, choices=(1, 2), default=1)
    p.add_argument("--eta-s", type=float, default=0.0, help="reserve price per second")
    _add_auction_flags(p)

    p = sub.add_parser("sweep", help="cartesian sweep over lambda and eta_s")
    p.add_argument("--grid", required=True)
    p.add_argument("--lambda-list", type=_int_list, required=True,
                   help="comma list, e.g. 8,15,25")
    p.add_argument("--eta-s-list", type=_float_list, default=[0.0])
    p.add_argument("--sets", type=_int_list, default=[1, 2])
    _add_auction_flags(p)

    return parser


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(message)s")
    args = build_parser().parse_args(argv)

    if args.command == "gen-occupancy":
        grid = synthesize_occupancy(args.channels, args.days, args.duty_cycle,
                                    args.seed, slot_seconds=args.slot_seconds)
        save_occupancy(grid, args.out)
        return 0

    if args.command == "gen-requests":
        spec = WorkloadSpec(n_requests=args.lam, set_kind=args.set_kind,
                            hot_fraction=args.delta, horizon=args.horizon,
                            seed=args.seed)
        save_requests(generate_requests(spec), args.out)
        return 0

    grid = load_occupancy(args.grid)
    if args.command == "run":
        requests = None
        if args.requests is not None:
            requests = load_requests(args.requests)
            lambdas = [len(requests)]
        elif args.lam is not None:
            lambdas = [args.lam]
        else:
            print("run: pass --requests or --lambda", file=sys.stderr)
            return 2
        plan = ExperimentPlan(
            lambdas=lambdas, eta_s_values=[args.eta_s], set_kinds=[args.set_kind],
            trials=1 if requests is not None else args.trials,
            master_seed=args.seed, beta=args.beta, xi=args.xi,
            mechanisms=args.mechanisms, vcg_max_jobs=args.vcg_max_jobs,
            timing=args.timing, hot_fraction=args.delta, day=args.day,
        )
        rows = run_experiment(grid, plan, requests=requests)
    else:
        plan = ExperimentPlan(
            lambdas=args.lambda_list, eta_s_values=args.eta_s_list,
            set_kinds=args.sets, trials=args.trials, master_seed=args.seed,
            beta=args.beta, xi=args.xi, mechanisms=args.mechanisms,
            vcg_max_jobs=args.vcg_max_jobs, timing=args.timing,
            hot_fraction=args.delta, day=args.day,
        )
        rows = run_experiment(grid, plan)

    write_results_csv(rows, args.out)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())

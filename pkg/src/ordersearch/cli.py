"""Command-line entry point: bound calculators, synthetic sweeps, and the
session service.

Exit codes: 0 success, 1 runtime failure (or infeasible accuracy under
--strict), 2 usage error.
"""

from __future__ import annotations

import argparse
import socket
import sys
from typing import Sequence

import numpy as np

from .bounds import budget_report
from .core import NoiseKind, NoiseModel, ProblemSpec
from .harness import (
    GrmSweepConfig,
    SquareSweepConfig,
    run_grm_sweep,
    run_square_sweep,
    summarize,
    write_report,
)
from .oracles import builtin_function, builtin_functions, random_parabola_suite


def _int_or_auto(text: str):
    if text == "auto":
        return None
    return int(text)


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _select_functions(name: str, count: int, seed: int, parser: argparse.ArgumentParser):
    if name == "random":
        return random_parabola_suite(count, np.random.default_rng(seed))
    if name == "all":
        return builtin_functions()
    try:
        return [builtin_function(name)]
    except KeyError as exc:
        parser.error(str(exc.args[0]))


def _noise_model(kind: str, delta: float, parser: argparse.ArgumentParser) -> NoiseModel:
    if delta < 0:
        parser.error(f"--delta must be >= 0, got {delta}")
    if kind != NoiseKind.ZERO.value and delta == 0:
        parser.error(f"--noise {kind} needs --delta > 0")
    if kind == NoiseKind.ZERO.value and delta > 0:
        parser.error("--noise zero contradicts --delta > 0; pick uniform or adversarial")
    return NoiseModel(NoiseKind(kind), delta=delta)


def cmd_bounds(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    if args.delta <= 0:
        parser.error("delta must be positive to compute a noise-adapted schedule")
    spec = ProblemSpec(
        R=args.r, M=args.m, L=args.l, epsilon=args.epsilon, delta=args.delta, mu=args.mu
    )
    report = budget_report(spec)
    print(f"schedule_constant = {report.schedule_constant!r}")
    print(f"n_inner = {report.n_inner}")
    print(f"grm_value_error = {report.grm_value_error!r}")
    print(f"arg_accuracy = {report.arg_accuracy!r}")
    print(f"inner_accuracy = {report.inner_accuracy!r}")
    print(f"k_outer = {report.k_outer}")
    print(f"total_comparisons = {report.total_comparisons}")
    print(f"epsilon_feasible = {'true' if report.epsilon_feasible else 'false'}")
    if not report.epsilon_feasible:
        print(
            f"warning: epsilon={args.epsilon} is not reachable at noise bound "
            f"delta={args.delta} (line searches cannot be that accurate)",
            file=sys.stderr,
        )
        if args.strict:
            return 1
    return 0


def cmd_run_grm(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    functions = _select_functions(args.func, args.count, args.seed, parser)
    model = _noise_model(args.noise, args.delta, parser)
    if args.n is None and model.delta <= 0:
        parser.error("--n auto derives the noise-adapted schedule; it needs --delta > 0")
    config = GrmSweepConfig(
        functions=tuple(functions),
        noise=(model,),
        n_values=(args.n,),
        trials=args.trials,
        base_seed=args.seed,
        grid_n=args.grid_n,
    )
    records = run_grm_sweep(config)
    csv_path, summary_path = write_report(records, args.out)
    print(summarize(records), end="")
    print(f"wrote {len(records)} records to {csv_path} (summary: {summary_path})")
    return 1 if any(r.violated for r in records) else 0


def cmd_run_square(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    functions = _select_functions(args.func, args.count, args.seed, parser)
    model = _noise_model(args.noise, args.delta, parser)
    config = SquareSweepConfig(
        functions=tuple(functions),
        epsilons=tuple(args.epsilon),
        noise=(model,),
        trials=args.trials,
        base_seed=args.seed,
        n_inner=args.n_inner,
        k_outer=args.k,
        grid_n=args.grid_n,
    )
    records = run_square_sweep(config)
    csv_path, summary_path = write_report(records, args.out)
    print(summarize(records), end="")
    print(f"wrote {len(records)} records to {csv_path} (summary: {summary_path})")
    return 1 if any(r.violated for r in records) else 0


def cmd_serve(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    import uvicorn

    from .service import create_app

    try:
        app = create_app(args.state_dir)
    except OSError as exc:
        print(f"error: cannot use state dir {args.state_dir}: {exc}", file=sys.stderr)
        return 1
    sock = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    sock.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
    try:
        sock.bind((args.host, args.port))
    except OSError as exc:
        sock.close()
        print(f"error: cannot bind {args.host}:{args.port}: {exc}", file=sys.stderr)
        return 1
    host, port = sock.getsockname()[:2]
    print(f"serving sessions on http://{host}:{port} (state dir: {args.state_dir})", flush=True)
    server = uvicorn.Server(uvicorn.Config(app, log_level=args.log_level))
    server.run(sockets=[sock])
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ordersearch",
        description="Comparison-oracle optimization: noise-aware golden-section "
        "line search, square dichotomy, bound calculators, and a pairwise "
        "preference session service.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bounds", help="print schedules, error bounds, and feasibility")
    p.add_argument("--r", type=float, required=True, help="search radius / segment length")
    p.add_argument("--m", type=float, required=True, help="value-Lipschitz constant")
    p.add_argument("--l", type=float, required=True, help="gradient-Lipschitz constant")
    p.add_argument("--mu", type=float, required=True, help="strong-convexity constant")
    p.add_argument("--delta", type=float, required=True, help="oracle noise bound")
    p.add_argument("--epsilon", type=float, required=True, help="target value accuracy")
    p.add_argument("--strict", action="store_true", help="exit 1 when epsilon is infeasible")
    p.set_defaults(handler=cmd_bounds)

    common: list[tuple[str, dict]] = [
        ("--func", dict(default="all", help="builtin function id, 'all', or 'random'")),
        ("--count", dict(type=_positive_int, default=100, help="suite size for --func random")),
        ("--noise", dict(choices=[k.value for k in NoiseKind], default="zero")),
        ("--delta", dict(type=float, default=0.0, help="oracle noise bound")),
        ("--trials", dict(type=_positive_int, default=1, help="repeats per combination")),
        ("--seed", dict(type=int, default=0, help="base seed; trials derive from it")),
    ]

    p = sub.add_parser("run-grm", help="line-search sweep; writes the trial CSV")
    for flag, kw in common:
        p.add_argument(flag, **kw)
    p.add_argument("--n", type=_int_or_auto, default="auto",
                   help="comparisons per search, or 'auto' for the noise-adapted schedule")
    p.add_argument("--grid-n", type=_positive_int, default=4096, help="ground-truth grid")
    p.add_argument("--out", default="grm_report.csv", help="CSV output path")
    p.set_defaults(handler=cmd_run_grm)

    p = sub.add_parser("run-square", help="two-dimensional sweep; writes the trial CSV")
    for flag, kw in common:
        p.add_argument(flag, **kw)
    p.add_argument("--epsilon", type=float, action="append",
                   help="target accuracy; repeatable (default 0.01)")
    p.add_argument("--n-inner", type=_int_or_auto, default="auto",
                   help="comparisons per line search, or 'auto'")
    p.add_argument("--k", type=_int_or_auto, default="auto",
                   help="halving iterations, or 'auto'")
    p.add_argument("--grid-n", type=_positive_int, default=1000, help="ground-truth grid")
    p.add_argument("--out", default="square_report.csv", help="CSV output path")
    p.set_defaults(handler=cmd_run_square)

    p = sub.add_parser("serve", help="run the pairwise-preference session service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000, help="0 picks an ephemeral port")
    p.add_argument("--state-dir", default="sessions", help="session persistence directory")
    p.add_argument("--log-level", default="info")
    p.set_defaults(handler=cmd_serve)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.command == "run-square" and not getattr(args, "epsilon", None):
        args.epsilon = [0.01]
    try:
        return args.handler(args, parser)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

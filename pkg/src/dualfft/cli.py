from __future__ import annotations
import argparse
import json
import logging
import sys
from typing import List, Optional

from .analysis import (
    measure_error, observe_butterfly_constant, reproduce_table1,
    reproduce_table2, run_verification,
)
from .config import load_settings
from .logging import setup_logging
from .reporting import render_reports, render_table
from .twiddle import build_table
from .types import DualFftError, Metric, OutputFormat

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2

STATS_COLUMNS = ["strategy", "t_max", "argmax_k", "singular_count", "per_butterfly_bound", "divergent"]
BOUNDS_COLUMNS = ["strategy", "m", "t_max", "cumulative_bound", "linearized_bound", "improvement_vs_baseline"]
ERROR_COLUMNS = ["n", "strategy", "precision", "metric", "trials", "rel_l2_median", "rel_l2_max", "nonfinite_trials"]


class UsageError(DualFftError):
    kind = "usage"


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(f"{self.prog}: {message}")


def _diagnostic(kind: str, message: str) -> None:
    print(json.dumps({"error": kind, "message": message}), file=sys.stderr)


def cmd_twiddles(args: argparse.Namespace) -> int:
    table = build_table(args.n, args.strategy, clamp_eps=args.clamp_eps)
    sys.stdout.write(render_table(table, args.format))
    return EXIT_OK


def cmd_stats(args: argparse.Namespace) -> int:
    rows = reproduce_table1(args.n, args.precision)
    sys.stdout.write(render_reports(rows, args.format, STATS_COLUMNS))
    return EXIT_OK


def cmd_bounds(args: argparse.Namespace) -> int:
    rows = reproduce_table2(args.n, args.precision)
    sys.stdout.write(render_reports(rows, args.format, BOUNDS_COLUMNS))
    return EXIT_OK


def cmd_error(args: argparse.Namespace) -> int:
    report = measure_error(
        args.n, args.strategy, args.precision, args.metric, args.trials, args.seed,
        workers=args.workers, clamp_eps=args.clamp_eps,
    )
    sys.stdout.write(render_reports([report], args.format, ERROR_COLUMNS))
    return EXIT_OK


def cmd_constant(args: argparse.Namespace) -> int:
    report = observe_butterfly_constant(args.n, args.strategy, args.precision, args.trials, args.seed)
    sys.stdout.write(render_reports([report], args.format))
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    results = run_verification(args.max_n)
    for r in results:
        print(f"{'PASS' if r.passed else 'FAIL'} {r.name}: {r.detail}")
    failed = [r.name for r in results if not r.passed]
    if failed:
        _diagnostic("verification_failed", "failed checks: " + ", ".join(failed))
        return EXIT_FAILED
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    cfg = load_settings()
    formats = [f.value for f in OutputFormat]

    ap = _Parser(prog="dualfft", description="Dual-select FFT twiddle tables, bounds and error measurement")
    ap.add_argument("--verbose", action="store_true", help="log progress at INFO on stderr")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("twiddles", help="dump a twiddle table")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--strategy", default=cfg.cli.strategy)
    p.add_argument("--clamp-eps", type=float, default=None)
    p.add_argument("--format", choices=formats, default="csv")
    p.set_defaults(func=cmd_twiddles)

    p = sub.add_parser("stats", help="ratio bounds and per-butterfly bounds per strategy")
    p.add_argument("--n", type=int, default=cfg.analysis.table_n)
    p.add_argument("--precision", default="fp16")
    p.add_argument("--format", choices=formats, default=cfg.cli.format)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("bounds", help="cumulative bounds and improvement over Linzer-Feig")
    p.add_argument("--n", type=int, default=cfg.analysis.table_n)
    p.add_argument("--precision", default=cfg.cli.precision)
    p.add_argument("--format", choices=formats, default=cfg.cli.format)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("error", help="measured relative L2 error over seeded trials")
    p.add_argument("--n", type=int, default=cfg.analysis.table_n)
    p.add_argument("--strategy", default=cfg.cli.strategy)
    p.add_argument("--precision", default=cfg.cli.precision)
    p.add_argument("--metric", default=cfg.cli.metric)
    p.add_argument("--trials", type=int, default=cfg.cli.trials)
    p.add_argument("--seed", type=int, default=cfg.cli.seed)
    p.add_argument("--workers", type=int, default=cfg.cli.workers)
    p.add_argument("--clamp-eps", type=float, default=None)
    p.add_argument("--format", choices=formats, default=cfg.cli.format)
    p.set_defaults(func=cmd_error)

    p = sub.add_parser("constant", help="observed per-butterfly error constant")
    p.add_argument("--n", type=int, default=cfg.analysis.table_n)
    p.add_argument("--strategy", default=cfg.cli.strategy)
    p.add_argument("--precision", default="fp16")
    p.add_argument("--trials", type=int, default=cfg.cli.trials)
    p.add_argument("--seed", type=int, default=cfg.cli.seed)
    p.add_argument("--format", choices=formats, default=cfg.cli.format)
    p.set_defaults(func=cmd_constant)

    p = sub.add_parser("verify", help="run the self-check suite")
    p.add_argument("--max-n", type=int, default=cfg.verify.max_n)
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv: Optional[List[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        setup_logging("INFO" if args.verbose else None)
        if getattr(args, "metric", None) is not None:
            args.metric = _parse_metric(args.metric)
        if getattr(args, "workers", 1) < 1 or getattr(args, "trials", 1) < 1:
            raise UsageError("--trials and --workers must be >= 1")
        return args.func(args)
    except DualFftError as e:
        _diagnostic(e.kind, str(e))
        return EXIT_USAGE
    except ValueError as e:
        _diagnostic("invalid_argument", str(e))
        return EXIT_USAGE


def _parse_metric(value: str) -> Metric:
    try:
        return Metric(value)
    except ValueError:
        raise UsageError(f"unknown metric: {value!r}") from None


if __name__ == "__main__":
    sys.exit(main())

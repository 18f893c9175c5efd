"""Command line entry point.

Usage:

    fqdist verify {identities,sphere-decay,incidence,coverage,all} [options]

Exit codes: 0 when every check passed, 1 when a check failed, 2 on a
configuration error.
"""

from __future__ import annotations

import argparse
import os
import sys

from .errors import FqdistError, InvalidConfig
from .harness import SUITES, SuiteConfig, run_suite


def _int_list(text: str) -> tuple:
    try:
        return tuple(int(part) for part in text.split(",") if part.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma list of ints: {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fqdist",
        description="Verify distance set estimates over prime fields.")
    sub = parser.add_subparsers(dest="command", required=True)
    verify = sub.add_parser(
        "verify", help="run a verification suite and write reports")
    verify.add_argument("suite", choices=SUITES + ("all",),
                        help="which suite to run")
    verify.add_argument("--q", type=_int_list, default=(7, 13, 19, 31),
                        metavar="Q1,Q2,...", help="prime moduli")
    verify.add_argument("--d", type=_int_list, default=(2, 3),
                        metavar="D1,D2,...", help="dimensions, each >= 2")
    verify.add_argument("--n", type=_int_list, default=(2, 3),
                        metavar="N1,N2,...", help="norm exponents, each >= 2")
    verify.add_argument("--C", type=float, default=3.0,
                        help="coverage size multiplier")
    verify.add_argument("--trials", type=int, default=50,
                        help="random trials per cell")
    verify.add_argument("--seed", type=int, default=0,
                        help="root seed for all random streams")
    verify.add_argument("--c-env", type=float, default=10.0, dest="c_env",
                        help="envelope constant for asymptotic bounds")
    verify.add_argument("--out", default=None,
                        help="output directory (env FQDIST_OUT)")
    verify.add_argument("--jobs", type=int, default=None,
                        help="worker processes (env FQDIST_JOBS, default 1)")
    verify.add_argument("--points", default=None,
                        help="point set file to use as E (and F)")
    verify.add_argument("--no-figures", action="store_true",
                        help="skip figure rendering")
    return parser


def parse_cli(argv) -> SuiteConfig:
    """Parse arguments into a validated SuiteConfig.

    argparse itself exits with status 2 on malformed flags; semantic
    problems (composite q, bad ranges) raise InvalidConfig.
    """
    parser = build_parser()
    args = parser.parse_args(argv)
    out_dir = args.out or os.environ.get("FQDIST_OUT") or "fqdist-out"
    if args.jobs is not None:
        jobs = args.jobs
    else:
        jobs = int(os.environ.get("FQDIST_JOBS", "1"))
    config = SuiteConfig(
        suite=args.suite, q_list=args.q, d_list=args.d, n_list=args.n,
        C=args.C, trials=args.trials, seed=args.seed, c_env=args.c_env,
        out_dir=out_dir, jobs=jobs, points_path=args.points,
        figures=not args.no_figures)
    config.validate()
    return config


def main(argv=None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    try:
        config = parse_cli(argv)
    except InvalidConfig as exc:
        print(f"fqdist: configuration error: {exc}", file=sys.stderr)
        return 2
    try:
        report = run_suite(config)
    except FqdistError as exc:
        print(f"fqdist: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    for name in report.suites_run:
        agg = report.aggregates[name]
        status = "PASS" if agg["passed"] else "FAIL"
        print(f"[{status}] {name}")
    print(f"reports written to {config.out_dir}")
    print(f"verdict: {'pass' if report.verdict else 'fail'}")
    return 0 if report.verdict else 1


if __name__ == "__main__":
    sys.exit(main())

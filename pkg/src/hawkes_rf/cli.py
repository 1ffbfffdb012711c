"""Command-line front end: ``hawkes-rf simulate | fit | benchmark | report``."""

from __future__ import annotations

import argparse
import csv
import logging
import sys
from pathlib import Path

from . import bench
from .events import read_sequence
from .exceptions import FitError, SequenceFormatError
from .fit import WindowRule, mle_fit, select_renormalized
from .kernels import Family

EXIT_OK = 0
EXIT_INPUT_ERROR = 2
EXIT_NOT_CONVERGED = 3


def _load_config(args) -> bench.BenchmarkConfig:
    config = bench.BenchmarkConfig.load(args.config) if args.config else bench.BenchmarkConfig()
    return bench.with_overrides(
        config,
        out_dir=args.out,
        seed=args.seed,
        workers=args.workers,
        epsilons=args.epsilon,
    )


def _run_simulate(args) -> int:
    config = _load_config(args)
    paths = bench.cmd_simulate(config)
    print(f"wrote {len(paths)} sequences under {Path(config.out_dir) / 'sequences'}")
    return EXIT_OK


def _run_benchmark(args) -> int:
    config = _load_config(args)
    for directory in bench.cmd_benchmark(config):
        print(f"reports in {directory}")
    return EXIT_OK


def _run_report(args) -> int:
    root = Path(args.out)
    dirs = sorted(p.parent for p in root.glob("T*/per_sequence.csv"))
    if not dirs:
        print(f"error: no per_sequence.csv found under {root}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    for directory in dirs:
        bench.write_reports(directory)
        print(f"regenerated reports in {directory}")
    return EXIT_OK


def _run_fit(args) -> int:
    try:
        seq = read_sequence(args.sequence)
        family = Family.parse(args.family)
    except (OSError, SequenceFormatError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR

    rule = WindowRule(args.tail_mass, args.max_window)
    try:
        mle = mle_fit(seq, family, rule=rule)
    except (FitError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR

    seq_id = args.sequence_id or str(args.sequence)
    if args.method == "mle":
        results = [mle]
    else:
        epsilons = args.epsilon or [0.1]
        results = [select_renormalized(seq, mle, eps, rule) for eps in epsilons]
    rows = [bench.fit_row(r, seq_id, args.generator or "") for r in results]

    if args.append:
        path = Path(args.append)
        new = not path.exists() or path.stat().st_size == 0
        with open(path, "a", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=bench.FIT_COLUMNS, lineterminator="\n")
            if new:
                writer.writeheader()
            writer.writerows(rows)
    else:
        writer = csv.DictWriter(sys.stdout, fieldnames=bench.FIT_COLUMNS, lineterminator="\n")
        if args.header:
            writer.writeheader()
        writer.writerows(rows)
    return EXIT_OK if mle.converged else EXIT_NOT_CONVERGED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hawkes-rf", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    def grid_flags(p):
        p.add_argument("--config", help="JSON benchmark config")
        p.add_argument("--out", help="output directory (overrides config out_dir)")
        p.add_argument("--seed", type=int, help="master seed (overrides config)")
        p.add_argument("--workers", type=int, help="worker processes (overrides config)")
        p.add_argument("--epsilon", type=float, action="append", help="safety margin; repeatable")

    p = sub.add_parser("simulate", help="simulate the sequence grid")
    grid_flags(p)
    p.set_defaults(func=_run_simulate)

    p = sub.add_parser("benchmark", help="run MLE vs RF-MLE over the grid")
    grid_flags(p)
    p.set_defaults(func=_run_benchmark)

    p = sub.add_parser("report", help="regenerate summary and improvement CSVs")
    p.add_argument("--out", required=True, help="benchmark output directory")
    p.set_defaults(func=_run_report)

    p = sub.add_parser("fit", help="fit one sequence file and print a CSV row")
    p.add_argument("sequence", help="sequence file (T=<horizon> header, one time per line)")
    p.add_argument("--family", required=True, help="EXP, PWL, QEXP or RAY (case-insensitive)")
    p.add_argument("--method", choices=("mle", "rf-mle"), type=str.lower, default="rf-mle")
    p.add_argument("--epsilon", type=float, action="append", help="safety margin; repeatable")
    p.add_argument("--generator", help="generator family recorded in the row")
    p.add_argument("--sequence-id", help="identifier recorded in the row (default: the path)")
    p.add_argument("--tail-mass", type=float, default=None, help="kernel tail mass left out of the window")
    p.add_argument("--max-window", type=float, default=None, help="largest lag kept in the intensity sums")
    p.add_argument("--header", action="store_true", help="print the CSV header first")
    p.add_argument("--append", help="append rows to this CSV file instead of printing")
    p.set_defaults(func=_run_fit)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(asctime)s %(name)s %(levelname)s %(message)s",
    )
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())

"""Command line entry point for figrender."""

from __future__ import annotations

import argparse
import sys

from .csvread import FormatError
from .render import render_figure1a, render_overlay

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_USAGE = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="figrender",
        description="Render phase-distribution figures from phasekit CSV files.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_split = sub.add_parser("figure1a", help="split panel from two comparison CSVs")
    p_split.add_argument("--n1", required=True, help="CSV drawn only for theta < 0")
    p_split.add_argument("--n2", required=True, help="CSV drawn only for theta > 0")
    p_split.add_argument("--out", required=True, help="output image; format from extension")

    p_over = sub.add_parser("overlay", help="overlay any number of distribution CSVs")
    p_over.add_argument("csvs", nargs="+", help="input CSV files")
    p_over.add_argument(
        "--label",
        action="append",
        dest="labels",
        help="legend label, once per file, overriding the state metadata",
    )
    p_over.add_argument("--out", required=True, help="output image; format from extension")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "figure1a":
            render_figure1a(args.n1, args.n2, args.out)
        else:
            render_overlay(args.csvs, args.out, labels=args.labels)
    except (FormatError, OSError) as exc:
        print(f"figrender: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

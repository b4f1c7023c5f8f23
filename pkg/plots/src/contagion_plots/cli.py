"""The `plot` command line: `plot <kind> <in.csv> <out.png> [--ref 85]`.

Exit codes: 0 success, 1 unreadable or schema-mismatched input / output
failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import sys

from .figures import KINDS, FigureSpec, render
from .parser import SchemaError

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_USAGE = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plot",
        description="Render simulator CSVs as publication figures (PNG).",
    )
    parser.add_argument("kind", choices=KINDS, help="figure kind")
    parser.add_argument("input", help="input CSV (sweep CSV for sweep/summary, walk CSV for walk3d)")
    parser.add_argument("output", help="output PNG path")
    parser.add_argument(
        "--ref", type=float, default=85.0,
        help="horizontal reference percentage on sweep figures (default 85)",
    )
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        spec = FigureSpec(args.input, args.kind, args.output, reference_line=args.ref)
    except ValueError as exc:
        print(f"plot: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        render(spec)
    except SchemaError as exc:
        print(f"plot: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except OSError as exc:
        print(f"plot: cannot write {args.output}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    print(f"wrote {args.output}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

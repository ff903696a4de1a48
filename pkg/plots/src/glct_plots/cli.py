"""Command-line figure renderer for experiment CSVs.

Usage: glct-plots render --kind nmse_sweep --in results.csv --out fig.png

Exits 0 on success, 2 on schema or usage errors (naming the missing
column), and never mutates its inputs.
"""

from __future__ import annotations

import argparse
import sys

from .render import KINDS, PlotSpec, SchemaError, render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="glct-plots", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    r = sub.add_parser("render", help="render one CSV into one image")
    r.add_argument("--kind", required=True, choices=KINDS)
    r.add_argument("--in", dest="input_path", required=True, metavar="CSV")
    r.add_argument("--out", dest="output_path", required=True, metavar="IMAGE")
    r.add_argument("--title", default=None)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        render(PlotSpec(kind=args.kind, input_path=args.input_path,
                        output_path=args.output_path, title=args.title))
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())

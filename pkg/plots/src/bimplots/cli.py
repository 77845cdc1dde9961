"""CLI: `bimshap-plots figures` renders images, `bimshap-plots timing` prints
or writes the timing table. Exit codes: 0 ok, 1 validation error, 2 failure."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .figures import FigureSpec, render_budget_vs_spread
from .results import ResultFormatError
from .timing import render_timing_table


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser():
    parser = _Parser(prog="bimshap-plots",
                     description="figures and timing tables from result CSVs")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("figures", help="budget-vs-spread figure per CSV")
    p.add_argument("csv", nargs="+", help="harness result CSVs")
    p.add_argument("--out-dir", default="figures")
    p.add_argument("--format", default="png", choices=["png", "svg", "pdf"])
    p.add_argument("--dpi", type=int, default=120)
    p.set_defaults(fn=_cmd_figures)

    p = sub.add_parser("timing", help="timing table across CSVs")
    p.add_argument("csv", nargs="+")
    p.add_argument("--out", help="write here instead of stdout")
    p.set_defaults(fn=_cmd_timing)
    return parser


def _cmd_figures(args):
    spec = FigureSpec(csv_paths=args.csv, out_dir=args.out_dir,
                      fmt=args.format, dpi=args.dpi)
    for path in render_budget_vs_spread(spec):
        print(f"wrote {path}")
    return 0


def _cmd_timing(args):
    table = render_timing_table(args.csv)
    if args.out:
        Path(args.out).write_text(table, encoding="utf-8")
        print(f"wrote {args.out}")
    else:
        print(table, end="")
    return 0


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (ResultFormatError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # pragma: no cover - defensive
        print(f"internal error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

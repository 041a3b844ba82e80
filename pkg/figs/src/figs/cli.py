"""figs command line: render beam-pattern and MSE-sweep figures from the
run CSV outputs."""
from __future__ import annotations

import argparse
import sys

from .plots import plot_mse_sweep, plot_pattern
from .tables import SchemaError


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="figs",
                                     description="Render figures from run CSV outputs")
    sub = parser.add_subparsers(dest="command", required=True)

    pat = sub.add_parser("pattern", help="beam-pattern overlay from pattern.csv")
    pat.add_argument("csv")
    pat.add_argument("-o", "--out", required=True)
    pat.add_argument("--ylim", nargs=2, type=float, default=None,
                     metavar=("LO", "HI"))
    pat.add_argument("--floor", type=float, default=-120.0,
                     help="dB floor applied to all curves")

    mse = sub.add_parser("mse", help="MSE sweep curves from summary_median.csv")
    mse.add_argument("csv")
    mse.add_argument("-o", "--out", required=True)
    mse.add_argument("--logy", action="store_true")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "pattern":
            out = plot_pattern(args.csv, args.out, ylim=args.ylim,
                               floor_db=args.floor)
        else:
            out = plot_mse_sweep(args.csv, args.out, logy=args.logy)
    except SchemaError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())

"""plotkit command line: sweep CSV directory in, figure PNGs out."""

from __future__ import annotations

import argparse
import sys

from .figures import PlotError, render_figures


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="plotkit", description="Render sweep-result figures from simulator CSVs"
    )
    parser.add_argument("--csv", required=True, help="directory of sweep CSV files")
    parser.add_argument("--figures", default="all",
                        help='"all" or comma-separated figure ids (1-18)')
    parser.add_argument("--out", required=True, help="output directory for PNGs")
    args = parser.parse_args(argv)

    fig_ids = None
    if args.figures != "all":
        try:
            fig_ids = [int(part) for part in args.figures.split(",") if part.strip()]
        except ValueError:
            print(f"error: bad --figures value {args.figures!r}", file=sys.stderr)
            return 2

    try:
        rendered = render_figures(args.csv, args.out, fig_ids)
    except PlotError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    for info in rendered:
        print(f"fig{info.fig_id:02d}: {info.n_traces} traces -> {info.path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())

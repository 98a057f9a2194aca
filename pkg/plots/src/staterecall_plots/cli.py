"""Command-line entry point: one figure per invocation.

Exit codes: 0 success, 1 runtime failure (bad CSV contents, I/O), 2 usage
error (argparse).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from staterecall_plots.figures import KINDS, METRICS, PlotError, PlotSpec, plot


def labeled_csv(text: str) -> tuple[str, Path]:
    label, sep, path = text.partition("=")
    if not sep or not label or not path:
        raise argparse.ArgumentTypeError(f"expected LABEL=PATH, got {text!r}")
    return label, Path(path)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="staterecall-plots",
        description="Render difficulty lines, (m, n) heatmaps, or parsed-weighted "
        "comparisons from metrics CSV files.",
    )
    parser.add_argument(
        "--csv", type=labeled_csv, action="append", required=True, metavar="LABEL=PATH",
        help="labeled metrics CSV; repeat for multiple runs in one figure",
    )
    parser.add_argument("--kind", choices=KINDS, required=True)
    parser.add_argument(
        "--metric", choices=METRICS, default="accuracy",
        help="which column to plot (pw_compare always pairs accuracy with parsed_weighted)",
    )
    parser.add_argument(
        "--out", type=Path, required=True,
        help="output image; format chosen by extension (.png, .svg, ...)",
    )
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    spec_kwargs = dict(
        inputs=tuple(args.csv), kind=args.kind, output_path=args.out, metric=args.metric
    )
    try:
        written = plot(PlotSpec(**spec_kwargs))
    except (PlotError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {written}")
    return 0


if __name__ == "__main__":
    sys.exit(main())

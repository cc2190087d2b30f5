"""Command-line figure renderer for defectlab CSV outputs.

Usage::

    defectlab-plot --kind radial_heatmap --in radial.csv --out fig.png
    defectlab-plot --kind site_map --in ldos.csv --out map.png --log
    defectlab-plot --kind panel_grid --in a.csv b.csv c.csv --out grid.png \
        --shared-scale
"""

from __future__ import annotations

import argparse
import sys

from .figures import KINDS, FigureSpec, SchemaError, render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="defectlab-plot",
        description="Render defectlab CSV tables into figures.")
    parser.add_argument("--kind", required=True, choices=KINDS)
    parser.add_argument("--in", dest="inputs", required=True, nargs="+",
                        metavar="CSV", help="input table(s)")
    parser.add_argument("--out", required=True, help="output image path")
    parser.add_argument("--vmax", type=float, default=None,
                        help="upper color limit (default: data maximum)")
    parser.add_argument("--log", action="store_true",
                        help="logarithmic color scale")
    parser.add_argument("--shared-scale", action="store_true",
                        help="one color scale across panel_grid panels")
    parser.add_argument("--title", default=None)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    spec = FigureSpec(kind=args.kind, inputs=args.inputs, output=args.out,
                      vmax=args.vmax, log_scale=args.log,
                      shared_scale=args.shared_scale, title=args.title)
    try:
        out = render(spec)
    except (SchemaError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())

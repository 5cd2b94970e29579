"""figgen command line: heatmap and surface rendering from CSV files."""

import argparse
import sys

from .render import FiggenError, render_field_heatmap, render_sweep_surface


def build_parser():
    parser = argparse.ArgumentParser(prog="figgen",
                                     description="Render figures from crawlfv CSV outputs")
    sub = parser.add_subparsers(dest="command", required=True)

    p_heat = sub.add_parser("heatmap", help="polar heatmap from a field snapshot")
    p_heat.add_argument("csv")
    p_heat.add_argument("png")

    p_surf = sub.add_parser("surface", help="(dr, dt) grid plot from sweep.csv")
    p_surf.add_argument("csv")
    p_surf.add_argument("quantity", choices=["t_steady", "polarization"])
    p_surf.add_argument("png")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        if args.command == "heatmap":
            out = render_field_heatmap(args.csv, args.png)
        else:
            out = render_sweep_surface(args.csv, args.quantity, args.png)
    except FiggenError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())

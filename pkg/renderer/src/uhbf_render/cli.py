"""Command line for the figure renderer: ``uhbf-render render --csv ... --kind ... --out ...``"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .render import FigureSpec, SchemaError, render


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="uhbf-render", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    cmd = sub.add_parser("render", help="render one sweep CSV to an image file")
    cmd.add_argument("--csv", type=Path, required=True, help="sweep CSV from the experiment CLI")
    cmd.add_argument("--kind", choices=("depth", "power"), required=True, help="figure type")
    cmd.add_argument("--out", type=Path, required=True, help="output image (.svg default, .png supported)")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        out = render(FigureSpec(csv_path=args.csv, kind=args.kind, out_path=args.out))
    except SchemaError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except FileNotFoundError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    print(f"wrote {out}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())

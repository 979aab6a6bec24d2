"""Render figure panels from sweep CSV files.

Subcommands:
  render    draw one dual-axis panel described by a JSON panel spec

Exit codes: 0 on success, 1 for bad flags, bad specs, or CSVs missing a
requested column.
"""

import argparse
import json
import sys

from .panel import load_panel_spec, render_panel


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _build_parser() -> _Parser:
    parser = _Parser(prog="wtfigures", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    render = sub.add_parser("render", help="render one panel from a JSON spec")
    render.add_argument("--spec", required=True, help="panel spec JSON file")
    render.add_argument("--csv", help="input CSV, overriding the spec")
    render.add_argument("--output", help="output image path, overriding the spec")
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        spec = load_panel_spec(args.spec, csv_path=args.csv, output=args.output)
        path = render_panel(spec)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {path}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())

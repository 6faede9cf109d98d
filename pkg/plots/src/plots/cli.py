"""Command line front end:  plots render --spec <file>"""

from __future__ import annotations

import argparse
import sys

from .render import render
from .spec import PlotSpec, SchemaError


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="plots", description="Render schmidt-cert singular-value spectra"
    )
    sub = parser.add_subparsers(dest="command", required=True)
    render_cmd = sub.add_parser("render", help="render one figure from a JSON spec")
    render_cmd.add_argument("--spec", required=True, help="JSON plot specification")
    args = parser.parse_args(argv)

    try:
        out = render(PlotSpec.from_file(args.spec))
    except SchemaError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return 2
    print(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())

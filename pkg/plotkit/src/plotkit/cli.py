"""plot: render one figure described by a YAML spec."""

from __future__ import annotations

import argparse
import sys

from .errors import PlotError
from .figspec import load_figure_spec
from .render import render


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="plot", description=__doc__)
    p.add_argument("--spec", required=True, help="YAML figure spec")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        out = render(load_figure_spec(args.spec))
    except PlotError as exc:
        print(f"plot error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())

"""One command line entry point per figure id."""

from __future__ import annotations

import argparse
import sys

from .csvdata import PlotDataError
from .figures import FigureSpec, render


def _run(figure: str, argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog=f"plotkit-{figure.replace('_', '-')}",
        description=f"Render the {figure} figure from simulation CSVs.")
    parser.add_argument("input_dir", help="directory holding the run's CSV artifacts")
    parser.add_argument("output", help="output image path")
    parser.add_argument("--format", choices=("png", "svg"), default="png")
    parser.add_argument("--linear-time", action="store_true",
                        help="linear instead of logarithmic time axis")
    args = parser.parse_args(argv)
    try:
        result = render(FigureSpec(figure=figure, input_dir=args.input_dir,
                                   output=args.output, fmt=args.format,
                                   log_time=not args.linear_time))
    except PlotDataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(result.path)
    return 0


def main_modes(argv=None) -> int:
    return _run("modes", argv)


def main_coupling_matrices(argv=None) -> int:
    return _run("coupling_matrices", argv)


def main_walk(argv=None) -> int:
    return _run("walk", argv)


def main_heat(argv=None) -> int:
    return _run("heat", argv)


def main_shuttle(argv=None) -> int:
    return _run("shuttle", argv)


if __name__ == "__main__":
    sys.exit(_run(sys.argv[1], sys.argv[2:]))

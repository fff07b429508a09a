"""Command line entry point: ``plots <run-dir> [--kind ...]``.

Renders figures into the run directory. Exit codes: 0 success,
2 bad inputs (missing/invalid files or arguments).
"""

from __future__ import annotations

import argparse
import sys

from .render import KINDS, render_run
from .schema import EmptyTelemetryError, SchemaError


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plots",
        description="render figures from a simulator run directory")
    parser.add_argument("run_dir", help="run directory (or comparison-pair "
                        "directory with run subdirectories)")
    parser.add_argument("--kind", action="append", choices=KINDS,
                        help="figure kind; repeatable (default: maneuver)")
    parser.add_argument("--format", default="png", choices=("png", "svg"),
                        help="image format (default: png)")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    kinds = args.kind or ["maneuver"]
    try:
        for kind in kinds:
            path = render_run(args.run_dir, kind, fmt=args.format)
            print(f"wrote {path}")
    except (SchemaError, EmptyTelemetryError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())

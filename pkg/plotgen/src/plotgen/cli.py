"""Console entry points: exit 0 on success, 1 on schema/data errors, 2 on
usage errors."""

from __future__ import annotations

import argparse
import sys

from .figures import plot_delay, plot_fraction
from .tables import SchemaError


def _run(fn, description: str, argv) -> int:
    p = argparse.ArgumentParser(description=description)
    p.add_argument("csv", help="input CSV path")
    p.add_argument("out", help="output image path (.png or .svg)")
    args = p.parse_args(argv)
    try:
        fn(args.csv, args.out)
    except (SchemaError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


def main_delay(argv=None) -> int:
    return _run(plot_delay, "delay-vs-rate curves from a sweep CSV", argv)


def main_fraction(argv=None) -> int:
    return _run(
        plot_fraction, "fraction-of-capacity-vs-K curves from a curve CSV", argv
    )


if __name__ == "__main__":
    sys.exit(main_delay())

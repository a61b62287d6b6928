"""Command-line figure renderer for qpulse CSV output.

    qpulse-figures --spec fig2 --csv fig2.csv --output fig2.png
    qpulse-figures --spec fig8 --csv fig8a.csv --csv2 fig8b.csv --output fig8.png
    qpulse-figures --csv run.csv --panels "E,W,Q;J;S,dSdt" --output custom.png
"""

from __future__ import annotations

import argparse
import sys

from .csvdata import FigureDataError
from .render import render
from .specs import BUILTIN_SPECS, builtin_spec, custom_spec


def main(argv=None):
    parser = argparse.ArgumentParser(prog="qpulse-figures",
                                     description=__doc__.splitlines()[0])
    parser.add_argument("--spec", help="builtin figure name "
                        f"({', '.join(sorted(BUILTIN_SPECS))})")
    parser.add_argument("--panels",
                        help="custom layout: columns comma-separated, panels "
                             "semicolon-separated")
    parser.add_argument("--csv", required=True, help="input record CSV")
    parser.add_argument("--csv2", help="second CSV (fig8 comparison)")
    parser.add_argument("--output", required=True, help="output image path")
    parser.add_argument("--dpi", type=int, default=130)
    args = parser.parse_args(argv)

    try:
        if bool(args.spec) == bool(args.panels):
            raise FigureDataError("give exactly one of --spec or --panels")
        spec = builtin_spec(args.spec) if args.spec else custom_spec(args.panels)
        paths = [args.csv]
        if len(spec.sources) == 2:
            if not args.csv2:
                raise FigureDataError(f"spec {spec.name!r} needs --csv2")
            paths.append(args.csv2)
        elif args.csv2:
            raise FigureDataError(f"spec {spec.name!r} takes a single CSV")
        result = render(spec, paths, args.output, dpi=args.dpi)
    except FigureDataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {result.path} ({result.n_panels} panels)")
    return 0


if __name__ == "__main__":
    sys.exit(main())

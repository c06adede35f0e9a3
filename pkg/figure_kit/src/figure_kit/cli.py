"""Command-line entry: render figures from simulation CSVs.

Either ``figure-kit render --spec spec.json`` with a JSON file:

    {"inputs": [{"path": "run_hybrid.csv", "label": "hybrid"},
                {"path": "run_complementary.csv", "label": "complementary"}],
     "panels": ["att_err", "mode", "e_h_norm", "gamma_err"],
     "out": "figure.png"}

or positional CSVs with ``--panels`` and ``--out``; labels default to
the file stems.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

from .render import PANELS, FigureSpec, SchemaError, SeriesInput, render


def _spec_from_json(path: str) -> FigureSpec:
    with open(path) as f:
        data = json.load(f)
    inputs = [SeriesInput(d["path"], d.get("label", _stem(d["path"])))
              for d in data["inputs"]]
    return FigureSpec(inputs, list(data["panels"]), data["out"])


def _stem(path: str) -> str:
    return os.path.splitext(os.path.basename(path))[0]


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="figure-kit",
        description="Render multi-panel figures from observer CSV output")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("render")
    p.add_argument("csvs", nargs="*", help="input CSV files")
    p.add_argument("--spec", help="JSON figure spec (overrides positionals)")
    p.add_argument("--panels",
                   help="comma-separated subset of: " + ",".join(PANELS))
    p.add_argument("--labels", help="comma-separated labels, one per CSV")
    p.add_argument("--out", help="output image path")
    args = parser.parse_args(argv)

    try:
        if args.spec:
            spec = _spec_from_json(args.spec)
        else:
            if not args.csvs or not args.panels or not args.out:
                parser.error("need CSVs, --panels and --out (or --spec)")
            labels = (args.labels.split(",") if args.labels
                      else [_stem(c) for c in args.csvs])
            if len(labels) != len(args.csvs):
                parser.error("one label per CSV required")
            spec = FigureSpec([SeriesInput(c, l)
                               for c, l in zip(args.csvs, labels)],
                              args.panels.split(","), args.out)
        out = render(spec)
    except (SchemaError, ValueError, OSError, KeyError,
            json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())

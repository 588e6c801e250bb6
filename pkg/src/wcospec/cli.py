"""Command line interface.

``spectra run <scenario.json>`` computes the closed-form report for one
scenario, optionally cross-checks it with the numerical oracles, and
writes a deterministic JSON document (and optionally an SVG picture).
``spectra examples`` lists the bundled scenario catalog.

Exit codes: 0 success, 1 schema violation, 2 engine refusal,
3 oracle disagreement under --verify --strict.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import catalog, numerics, report, svgplot, verify
from .errors import (ConvergenceError, DomainError, Refusal, SchemaError,
                     UnresolvedStructureError)
from .funcmodel import build_homeo, build_weight
from .theorem_engine import Scenario, compute_spectra


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="spectra",
        description="spectra and essential spectra of invertible weighted "
                    "composition operators on [0,1]")
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="compute the report for a scenario file")
    run_p.add_argument("scenario", help="path to a scenario JSON file")
    run_p.add_argument("--verify", action="store_true",
                       help="run the numerical oracle suite")
    run_p.add_argument("--strict", action="store_true",
                       help="exit 3 when an oracle disagrees beyond tolerance")
    run_p.add_argument("--out", default=None, help="report path (default stdout)")
    run_p.add_argument("--plot", default=None, help="write an SVG rendering here")
    run_p.add_argument("--cloud", action="store_true",
                       help="overlay the advisory eigenvalue cloud on the plot")
    run_p.add_argument("--grid", type=int, default=numerics.DEFAULT_GRID,
                       help="oracle grid size")
    run_p.add_argument("--depth", type=int, default=numerics.DEFAULT_DEPTH,
                       help="oracle cocycle depth")
    run_p.add_argument("--sigma", default=None,
                       help="comma list from 1,2,3,4,5,ap,adjoint to select "
                            "which spectra are emitted")

    ex_p = sub.add_parser("examples", help="list the bundled scenario catalog")
    ex_p.add_argument("--emit", default=None, metavar="NAME",
                      help="print the named scenario document instead")

    args = parser.parse_args(argv)
    if args.command == "examples":
        return _examples(args)
    return _run(args)


def _examples(args) -> int:
    if args.emit:
        try:
            entry = catalog.get(args.emit)
        except KeyError as exc:
            print(str(exc), file=sys.stderr)
            return 1
        print(report.dumps(entry["scenario"]))
        return 0
    width = max(len(e["name"]) for e in catalog.CATALOG)
    for entry in catalog.CATALOG:
        print(f"{entry['name']:<{width}}  {entry['title']}")
    return 0


def _run(args) -> int:
    try:
        with open(args.scenario, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        print(f"cannot read scenario: {exc}", file=sys.stderr)
        return 1
    except json.JSONDecodeError as exc:
        print(f"scenario is not valid JSON: {exc}", file=sys.stderr)
        return 1

    try:
        scn = Scenario.from_json(doc)
        rep = compute_spectra(scn)
    except SchemaError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return 1
    except (DomainError, ConvergenceError) as exc:
        print(f"scenario rejected: {exc}", file=sys.stderr)
        return 1
    except (Refusal, UnresolvedStructureError) as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return 2

    verdicts = None
    if args.verify:
        verdicts = verify.verify_report(scn, rep, grid_size=args.grid,
                                        depth=args.depth)

    sigma_selection = args.sigma.split(",") if args.sigma else None
    try:
        doc_out = report.report_document(scn, rep, verdicts, sigma_selection)
    except ValueError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return 1
    text = report.dumps(doc_out)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)

    if args.plot:
        cloud = None
        if args.cloud:
            phi = build_homeo(scn.phi)
            w = build_weight(scn.w)
            m = verify.multiplier_exponent(rep, scn)
            cloud = numerics.eigen_cloud(phi, w, m)
        svgplot.write_report_svg(rep, args.plot, cloud)

    if args.verify and args.strict and any(not v.converged for v in verdicts):
        bad = [v.quantity for v in verdicts if not v.converged]
        print(f"oracle disagreement: {', '.join(bad)}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())

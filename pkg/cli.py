#!/usr/bin/env python3
"""
Command-line surface for the arcs toolkit.

Coordinates are (x, y) pairs over Z_n with y growing upward; certificates are
JSON files {"n": ..., "points": [[x, y], ...], "claims": {...}}.

Exit status: 0 ok, 1 claim failure or domain error, 2 usage error or
malformed input, 3 search budget exhausted (best-so-far still written).
"""

import argparse
import logging
import sys
from typing import List, Optional

from arc_model import alpha2_lift, alphap_lift, is_complete, normalize_2p, upper_bounds
from certificates import (
    fixture_witnesses, from_arcset, load_certificate, save_certificate, to_arcset, verify_certificate,
)
from config import DEFAULT_THREADS, SPLIT_DEPTH, configure_logging, validate_modulus
from errors import ArcError, BudgetExhausted, InvalidMode, MalformedCertificate, ModulusOutOfRange
from geometry import enumerate_lines
from ilp_export import build_model, write_lp
from render import render_ascii, render_svg
from solver import SearchOptions, certify, solve

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_FAILED, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3

MODE_NAMES = {"generic": "generic", "seeded": "seeded_2p"}


def _load(path: str):
    cert = load_certificate(path)
    validate_modulus(cert.n)
    return cert


def cmd_tau(args) -> int:
    n = validate_modulus(args.n)
    options = SearchOptions(mode=MODE_NAMES[args.mode], threads=args.threads, node_budget=args.budget,
                            split_depth=args.split_depth)
    result = solve(n, options)
    if args.out:
        save_certificate(certify(result), args.out)
    print(f"tau({n}) = {result.size} proven={str(result.proven).lower()}")
    if result.exhausted:
        raise BudgetExhausted(f"node budget {args.budget} exhausted", result)
    return EXIT_OK


def cmd_verify(args) -> int:
    report = verify_certificate(_load(args.certificate))
    print(report.summary())
    return EXIT_OK if report.ok else EXIT_FAILED


def cmd_normalize(args) -> int:
    X = to_arcset(_load(args.certificate))
    f, image = normalize_2p(X)
    print(f)
    print("points: " + " ".join(str(p) for p in image.points))
    if args.out:
        save_certificate(from_arcset(image, arc=True, complete=is_complete(image)), args.out)
    return EXIT_OK


def cmd_lift(args) -> int:
    X = to_arcset(_load(args.certificate))
    if args.map == "alpha2":
        image = alpha2_lift(X)
    else:
        if args.p is None:
            raise ModulusOutOfRange("--map alphap needs --p")
        validate_modulus(2 * args.p)
        image = alphap_lift(X, args.p)
    complete = is_complete(image)
    print(f"lifted {len(X)} points of Z_{X.n}^2 to {len(image)} points of Z_{image.n}^2 "
          f"complete={str(complete).lower()}")
    if args.out:
        save_certificate(from_arcset(image, arc=True, complete=complete), args.out)
    return EXIT_OK


def cmd_bounds(args) -> int:
    n = validate_modulus(args.n)
    bounds = upper_bounds(n, witnesses=fixture_witnesses(), chain_composites=args.chain_composites)
    print(bounds)
    if args.verbose:
        for note in bounds.provenance:
            print(f"  {note}")
    return EXIT_OK


def cmd_lines(args) -> int:
    n = validate_modulus(args.n)
    for row in enumerate_lines(n).rows():
        print(row)
    return EXIT_OK


def cmd_export_lp(args) -> int:
    n = validate_modulus(args.n)
    model = build_model(n)
    if args.out:
        write_lp(model, args.out)
        logger.info(f"wrote {len(model.rows)} rows to {args.out}")
    else:
        sys.stdout.write(write_lp(model))
    return EXIT_OK


def cmd_render(args) -> int:
    X = to_arcset(_load(args.certificate))
    drawing = render_ascii(X) if args.format == "ascii" else render_svg(X) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(drawing)
    else:
        sys.stdout.write(drawing)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="arcs",
        description="Arcs in Z_n^2: exact search, certificates, lifts, bounds and ILP export. "
                    "Points are (x, y) with y increasing upward.")
    parser.add_argument("--log-level", default=None, help="overrides ARCS_LOG_LEVEL")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("tau", help="compute tau(Z_n^2) by exact search")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--mode", choices=sorted(MODE_NAMES), default="generic")
    p.add_argument("--threads", type=int, default=DEFAULT_THREADS)
    p.add_argument("--budget", type=int, default=None, help="node budget; unlimited by default")
    p.add_argument("--split-depth", type=int, default=SPLIT_DEPTH)
    p.add_argument("--out", help="certificate path")
    p.set_defaults(handler=cmd_tau)

    p = sub.add_parser("verify", help="check the claims of a certificate")
    p.add_argument("certificate")
    p.set_defaults(handler=cmd_verify)

    p = sub.add_parser("normalize", help="map a large arc of Z_2p^2 onto one containing (0,0), (1,0), (0,1)")
    p.add_argument("certificate")
    p.add_argument("--out")
    p.set_defaults(handler=cmd_normalize)

    p = sub.add_parser("lift", help="lift an arc of Z_p^2 (alpha2) or Z_2^2 (alphap) to Z_2p^2")
    p.add_argument("certificate")
    p.add_argument("--map", choices=["alpha2", "alphap"], required=True)
    p.add_argument("--p", type=int, default=None, help="odd prime for alphap")
    p.add_argument("--out")
    p.set_defaults(handler=cmd_lift)

    p = sub.add_parser("bounds", help="lower and upper bounds on tau(Z_n^2)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--verbose", action="store_true", help="print where each bound comes from")
    p.add_argument("--chain-composites", action="store_true",
                   help="feed exact values of composite factors into the coprime split")
    p.set_defaults(handler=cmd_bounds)

    p = sub.add_parser("lines", help="list every line of Z_n^2")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(handler=cmd_lines)

    p = sub.add_parser("export-lp", help="write the integer program in CPLEX LP format")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(handler=cmd_export_lp)

    p = sub.add_parser("render", help="draw a certificate as an ASCII or SVG grid")
    p.add_argument("certificate")
    p.add_argument("--format", choices=["ascii", "svg"], default="ascii")
    p.add_argument("--out")
    p.set_defaults(handler=cmd_render)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_USAGE
    configure_logging(args.log_level)
    try:
        return args.handler(args)
    except BudgetExhausted as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_BUDGET
    except (InvalidMode, MalformedCertificate, ModulusOutOfRange) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except ArcError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FAILED
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())

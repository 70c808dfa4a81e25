"""Command-line front end: ``ribbonpoly compute|compose|verify|knot``.

Exit status 1 reports a violated precondition, 2 a parse error.
"""

from __future__ import annotations

import argparse
import random
import sys
import time
from pathlib import Path
from typing import Dict, List, Optional

from . import __version__
from .errors import GraphFormatError, ParseError, RibbonPolyError

DEFAULT_SEED = 20240601


def _switches(items: Optional[List[str]], allowed, what: str) -> Dict[str, str]:
    out = {}
    for item in items or []:
        key, sep, val = item.partition("=")
        if not sep or not key:
            raise GraphFormatError(f"{what} expects EDGE=VALUE, got {item!r}")
        if val not in allowed:
            raise GraphFormatError(f"{what} value for {key!r} must be one of {sorted(allowed)}")
        out[key] = val
    return out


def cmd_compute(args) -> int:
    from .core.io import load_graph
    from .statesum import br_polynomial, tutte, z_multivariate

    g = load_graph(args.input).checked()
    if args.poly == "z":
        out = z_multivariate(g)
    elif args.poly == "br":
        out = br_polynomial(g)
    else:
        out = tutte(g)
    print(out)
    return 0


def cmd_compose(args) -> int:
    from .compose import compose_br_general, compose_br_planar, compose_tutte
    from .core.decomposition import PieceSlot
    from .core.io import load_decomposition
    from .core.surgery import assemble
    from .statesum import z_polynomial

    d = load_decomposition(args.decomp).checked()
    flips = {e: v == "true" for e, v in _switches(args.flip, {"true", "false"}, "--flip").items()}
    ends = _switches(args.ends, {"default", "swap"}, "--ends")
    for e in list(flips) + list(ends):
        if not d.template.has_edge(e):
            raise RibbonPolyError(f"unknown template edge {e!r}")
    for e, val in ends.items():
        d.pieces[e] = PieceSlot(d.pieces[e].piece, val)
    if args.method == "tutte":
        out = compose_tutte(d)
    elif args.method == "planar":
        out = compose_br_planar(d)
    else:
        out = compose_br_general(d)
    print(out)
    if args.check:
        g = assemble(d, flips)
        brute = z_polynomial(g, "b", args.method != "tutte", False)
        print("MATCH" if brute == out else "MISMATCH")
        if brute != out:
            return 1
    return 0


def cmd_knot(args) -> int:
    from .knots import format_t, jones, kauffman_bracket, load_pd, writhe

    d = load_pd(args.pd)
    chosen = [f for f in ("bracket", "jones", "writhe") if getattr(args, f)] or ["bracket", "jones", "writhe"]
    br = kauffman_bracket(d) if set(chosen) & {"bracket", "jones"} else None
    for what in chosen:
        if what == "bracket":
            val = str(br)
        elif what == "jones":
            val = format_t(jones(d, br))
        else:
            val = str(writhe(d))
        print(val if len(chosen) == 1 else f"{what}: {val}")
    return 0


def cmd_verify(args) -> int:
    from .verify import run_suite

    rng = random.Random(args.seed)
    start = time.time()
    ok = True
    for name, passed, detail in run_suite(args.suite, rng, args.count):
        ok &= passed
        print(f"{'PASS' if passed else 'FAIL'} {name}: {detail}")
    print(f"{'all passed' if ok else 'FAILURES'} in {time.time() - start:.1f}s (seed {args.seed})")
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ribbonpoly", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("compute", help="Z, R or T of a ribbon graph JSON file")
    c.add_argument("--input", required=True, type=Path)
    c.add_argument("--poly", choices=("z", "br", "tutte"), default="z")
    c.set_defaults(func=cmd_compute)

    c = sub.add_parser("compose", help="compose a 2-decomposition")
    c.add_argument("--decomp", required=True, type=Path)
    c.add_argument("--method", choices=("tutte", "planar", "general"), default="tutte")
    c.add_argument("--check", action="store_true", help="compare with brute force on the assembled graph")
    c.add_argument("--flip", action="append", metavar="EDGE=true|false")
    c.add_argument("--ends", action="append", metavar="EDGE=default|swap")
    c.set_defaults(func=cmd_compose)

    c = sub.add_parser("verify", help="run seeded oracle-equivalence suites")
    c.add_argument("--suite", choices=("small", "full"), default="small")
    c.add_argument("--seed", type=int, default=DEFAULT_SEED)
    c.add_argument("--count", type=int, default=None, help="random instances per suite")
    c.set_defaults(func=cmd_verify)

    c = sub.add_parser("knot", help="invariants of a PD-code diagram")
    c.add_argument("--pd", required=True, type=Path)
    c.add_argument("--bracket", action="store_true")
    c.add_argument("--jones", action="store_true")
    c.add_argument("--writhe", action="store_true")
    c.set_defaults(func=cmd_knot)
    return ap


def main(argv: Optional[List[str]] = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except RibbonPolyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

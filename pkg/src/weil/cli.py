"""The ``weil`` command line.

Exit codes: 0 on success, 1 when a verification check fails, 2 on usage,
parse or input errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .algebra import WeilError, build_weil_algebra, parse_presentation, tensor
from .category import Diagram, equalizer, fibered_tensor, finite_limit
from .expr import parse_expr
from .linalg import fstr
from .parsing import ParseError
from .prolongation import DomainError, ModeError, WPoint, eval_jet
from .verify import SUITES, run_suite

USAGE_ERRORS = (ParseError, WeilError, ValueError, KeyError, TypeError, OSError, DomainError, ModeError)


class UsageError(Exception):
    pass


def _algebra(text: str, name: str | None = None):
    return build_weil_algebra(parse_presentation(text), name=name)


def _print_algebra(w, out) -> None:
    print(f"dimension {w.dim}", file=out)
    print("basis: " + ", ".join(w.basis), file=out)
    if w.presentation is not None:
        print(f"presentation: {w.presentation}", file=out)


def _span_lines(ambient, rows) -> list[str]:
    return [str(ambient.element(r)) for r in rows]


def cmd_parse(args, out) -> int:
    w = _algebra(args.presentation)
    if args.json:
        print(json.dumps(w.serialize(), indent=2), file=out)
    else:
        _print_algebra(w, out)
    return 0


def cmd_tensor(args, out) -> int:
    t = tensor(_algebra(args.p1), _algebra(args.p2))
    if args.json:
        print(json.dumps(t.serialize(), indent=2), file=out)
    else:
        _print_algebra(t, out)
    return 0


def cmd_fibered_tensor(args, out) -> int:
    s, incl = fibered_tensor(_algebra(args.p1), _algebra(args.p2))
    t = incl.dst
    rows = [incl.column(j) for j in range(s.dim)]
    basis = _span_lines(t, rows)
    if args.json:
        print(json.dumps({"dimension": s.dim, "ambient": t.serialize(), "basis": basis}, indent=2), file=out)
    else:
        print(f"dimension {s.dim}", file=out)
        print(f"inside: {t.presentation} (dimension {t.dim})", file=out)
        print("basis: " + ", ".join(basis), file=out)
    return 0


def _load_diagram(path: str) -> Diagram:
    with open(path) as fh:
        return Diagram.from_json(json.load(fh))


def _print_limit(lim, args, out) -> None:
    basis = _span_lines(lim.ambient, lim.echelon)
    if args.json:
        print(json.dumps({"dimension": lim.algebra.dim, "ambient_basis": list(lim.ambient.basis),
                          "basis": basis}, indent=2), file=out)
    else:
        print(f"dimension {lim.algebra.dim}", file=out)
        print(f"inside: {', '.join(lim.ambient.basis)} (dimension {lim.ambient.dim})", file=out)
        print("basis: " + ", ".join(basis), file=out)


def cmd_equalizer(args, out) -> int:
    d = _load_diagram(args.diagram)
    if len(d.edges) != 2 or d.edges[0][:2] != d.edges[1][:2]:
        raise UsageError("an equalizer diagram needs exactly two edges with the same source and target")
    _print_limit(equalizer(d.edges[0][2], d.edges[1][2]), args, out)
    return 0


def cmd_limit(args, out) -> int:
    _print_limit(finite_limit(_load_diagram(args.diagram)), args, out)
    return 0


def _number(text: str, exact: bool):
    text = text.strip()
    return Fraction(text) if exact else float(Fraction(text))


def cmd_jet(args, out) -> int:
    w = _algebra(args.algebra)
    f = parse_expr(args.expr)
    exact = args.mode == "exact"
    base = [_number(t, exact) for t in args.at.split(",")] if args.at.strip() else []
    if f.arity() > len(base):
        raise UsageError(f"expression uses {f.arity()} variables but --at gives {len(base)}")
    gens = w.generators  # u_i is perturbed by the i-th generator, if there is one
    coords = []
    for i, b in enumerate(base):
        c = w.scalar(b)
        if i < len(gens):
            c = c + gens[i]
        coords.append(c)
    value = eval_jet(f, WPoint(w, tuple(coords)), mode=args.mode)
    coeffs = [fstr(x) if exact else repr(float(x)) for x in value.coords]
    if args.json:
        print(json.dumps({"value": str(value), "basis": list(w.basis), "coefficients": coeffs}), file=out)
    else:
        print(f"value: {value}", file=out)
        print("basis: " + ", ".join(w.basis), file=out)
        print("coefficients: " + ", ".join(coeffs), file=out)
    return 0


def cmd_verify(args, out) -> int:
    names = list(SUITES) if args.suite == "all" else [args.suite]
    if args.suite != "all" and args.suite not in SUITES:
        raise UsageError(f"unknown suite {args.suite!r}; choose from: all, {', '.join(SUITES)}")
    reports = [run_suite(n) for n in names]
    if args.json:
        payload = reports[0].to_json() if args.suite != "all" else [r.to_json() for r in reports]
        print(json.dumps(payload, indent=2), file=out)
    else:
        for r in reports:
            print(f"{r.suite}  ({r.duration_ms} ms)", file=out)
            for c in r.checks:
                print(f"  [{c.status.upper():4}] {c.name}  ({c.cite})", file=out)
                dims = c.details.get("dims")
                if isinstance(dims, list):
                    print(f"         dims {dims}", file=out)
                if c.status != "pass":
                    print("         witness " + json.dumps(c.details.get("witness")), file=out)
    return 0 if all(r.passed for r in reports) else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="weil", description="Exact computations with Weil algebras and jets.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("parse", help="build a Weil algebra from a presentation")
    s.add_argument("presentation", help='e.g. "x,y | x^2, y^2 ; nil 3"')
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_parse)

    s = sub.add_parser("tensor", help="tensor product of two algebras")
    s.add_argument("p1")
    s.add_argument("p2")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_tensor)

    s = sub.add_parser("fibered-tensor", help="fibered tensor product inside the tensor product")
    s.add_argument("p1")
    s.add_argument("p2")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_fibered_tensor)

    for name, fn, helptext in (("equalizer", cmd_equalizer, "equalizer of a parallel pair"),
                               ("limit", cmd_limit, "limit of a finite diagram")):
        s = sub.add_parser(name, help=helptext)
        s.add_argument("diagram", help="JSON file with nodes and edges")
        s.add_argument("--json", action="store_true")
        s.set_defaults(func=fn)

    s = sub.add_parser("jet", help="evaluate an expression at a W-point")
    s.add_argument("--expr", required=True, help="e.g. \"exp(u0)*u1\"")
    s.add_argument("--algebra", required=True, help="presentation of W")
    s.add_argument("--at", required=True, help="comma-separated base point; u_i is perturbed by generator i")
    s.add_argument("--mode", choices=("exact", "float"), default="float")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_jet)

    s = sub.add_parser("verify", help="run a verification suite")
    s.add_argument("suite", help="suite id or 'all': " + ", ".join(SUITES))
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, sys.stdout)
    except ParseError as exc:
        print(f"weil: parse error: {exc}", file=sys.stderr)
        return 2
    except UsageError as exc:
        print(f"weil: {exc}", file=sys.stderr)
        return 2
    except USAGE_ERRORS as exc:
        print(f"weil: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

"""Command-line interface.

Exit codes: 0 success, 1 invalid input data, 2 a checker assertion failed,
3 internal error.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from .algebra import frac_str
from .checkers import FAIL, REFUSED, check_all, check_cy, check_level_collapse, check_max_face, check_veys
from .collapse import CollapseError, default_budget, find_collapse, verify_simultaneous
from .complex import (
    HYPERSURFACE,
    InvalidComplexError,
    StrataComplex,
    essential_skeleton,
    euler_characteristic,
    exceptional_subcomplex,
    level_subcomplex,
    minimal_value,
    over_x_subcomplex,
    weights,
)
from .curves import DEFAULT_MAX_BLOWUPS, PolySyntaxError, ResolutionError, resolve
from .io import FIXTURES, emit_complex, emit_report, load_complex, load_fixture
from .zeta import (
    candidate_poles,
    expanded,
    naive_zeta_specialized,
    pole_spectrum,
    render_naive,
    render_topological,
    topological_expression,
    topological_zeta,
)

EXIT_OK, EXIT_DATA, EXIT_FAIL, EXIT_INTERNAL = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _input_parent() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    _add_input(p)
    return p


def _add_input(p: argparse.ArgumentParser) -> None:
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("input", nargs="?", help="strata-complex/1 JSON file")
    src.add_argument("--fixture", choices=FIXTURES, help="use a bundled fixture")


def _format_parent() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--format", choices=("text", "json"), default="text", help="output format (default: text)")
    return p


def _budget_parent() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--budget", type=int, help="collapse search node budget (default: $ZETASK_BUDGET or 1000000)")
    return p


def build_parser() -> argparse.ArgumentParser:
    fmt, inp, bud = _format_parent(), _input_parent(), _budget_parent()
    parser = argparse.ArgumentParser(prog="zetask", description="Zeta functions, weights and skeleta of resolution data.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("resolve-curve", parents=[fmt], help="resolve a plane curve germ at the origin")
    p.add_argument("--poly", required=True, help='polynomial in x, y, e.g. "x^2+y^3"')
    p.add_argument("--emit", metavar="PATH", help="write the strata complex to PATH")
    p.add_argument("--tree", action="store_true", help="include the blowup tree")
    p.add_argument("--max-blowups", type=int, default=DEFAULT_MAX_BLOWUPS)

    p = sub.add_parser("zeta", parents=[fmt], help="topological or specialized naive zeta function")
    p.add_argument("kind", choices=("top", "naive"))
    _add_input(p)

    p = sub.add_parser("poles", parents=[fmt, inp], help="pole spectrum over the candidate poles")
    p.add_argument("--kind", choices=("top", "naive", "both"), default="both")

    sub.add_parser("lct", parents=[fmt, inp], help="log canonical threshold (minimal weight in degeneration mode)")
    sub.add_parser("weights", parents=[fmt, inp], help="vertex weights nu/N")

    p = sub.add_parser("skeleton", parents=[fmt, inp], help="subcomplexes of the dual complex")
    which = p.add_mutually_exclusive_group()
    which.add_argument("--essential", action="store_true", help="essential skeleton (default)")
    which.add_argument("--level", metavar="W", help="vertices of weight at most W")
    which.add_argument("--exceptional", action="store_true", help="exceptional part of Sk(Y, x)")
    which.add_argument("--over-x", action="store_true", help="Sk(Y, x)")
    p.add_argument("--emit", metavar="PATH", help="write the subcomplex to PATH")

    p = sub.add_parser("collapse", parents=[fmt, inp, bud], help="search a collapse onto the essential skeleton")
    p.add_argument(
        "--source",
        choices=("auto", "all", "over-x", "exceptional"),
        default="auto",
        help="complex to collapse (auto: as in the level-collapse check)",
    )
    p.add_argument("--thresholds", metavar="W,...", help="weight levels the collapse must respect")

    p = sub.add_parser("check", parents=[fmt, inp, bud], help="theorem consistency checks")
    which = p.add_mutually_exclusive_group()
    which.add_argument("--all", action="store_true", help="every applicable checker (default)")
    which.add_argument("--max-face", action="store_true")
    which.add_argument("--veys", action="store_true")
    which.add_argument("--cy", action="store_true")
    which.add_argument("--collapse", action="store_true")

    p = sub.add_parser("report", parents=[fmt, inp, bud], help="everything about one complex")
    p.add_argument("--all", action="store_true", help="accepted for compatibility; the report is always complete")
    return parser


# ---------------------------------------------------------------------------


def _load(args) -> StrataComplex:
    return load_fixture(args.fixture) if args.fixture else load_complex(args.input)


def _budget(args) -> int:
    if getattr(args, "budget", None) is not None:
        if args.budget < 1:
            raise UsageError("--budget must be positive")
        return args.budget
    try:
        return default_budget()
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _weights_json(c: StrataComplex) -> dict:
    return {k: frac_str(v) for k, v in weights(c).items()}


def _pole_json(reports) -> list:
    return [p.to_json() for p in reports]


def _complex_summary(c: StrataComplex) -> dict:
    return {
        "cells": [cell.id for cell in c.cells],
        "vertices": [v.id for v in c.vertices],
        "euler_characteristic": euler_characteristic(c),
    }


def _zeta_json(c: StrataComplex, kind: str) -> dict:
    if kind == "top":
        z = topological_zeta(c)
        return {"factored": render_topological(z), "expanded": expanded(z)}
    nz = naive_zeta_specialized(c)
    return {
        "variable": "T = L^(-s)",
        "specialization": f"L -> u^2, u = w^{nz.D}",
        "rendered": render_naive(nz),
    }


def _poles(c: StrataComplex, kind: str) -> dict:
    cands = candidate_poles(c)
    out = {}
    if kind in ("top", "both"):
        out["topological"] = _pole_json(pole_spectrum(topological_zeta(c), cands, topological_expression(c), c.ambient_dimension))
    if kind in ("naive", "both"):
        out["naive_specialized"] = _pole_json(pole_spectrum(naive_zeta_specialized(c), cands, bound=c.ambient_dimension))
    return out


def _pole_lines(name: str, reports: list) -> list[str]:
    lines = []
    for p in reports:
        if p["order"]:
            flag = " (largest)" if p["largest"] else ""
            lines.append(f"{name}: pole order {p['order']} at s = {p['s0']}{flag}")
        else:
            lines.append(f"{name}: no pole at s = {p['s0']}")
    return lines


def _collapse_source(c: StrataComplex, which: str) -> StrataComplex:
    if which == "all" or c.mode != HYPERSURFACE:
        return c
    if which == "over-x":
        return over_x_subcomplex(c)
    if which == "exceptional":
        return exceptional_subcomplex(c, over_x=True)
    return over_x_subcomplex(c) if minimal_value(c) == 1 else exceptional_subcomplex(c, over_x=True)


def _output(args, results: dict, text: str | None = None) -> None:
    document, summary = emit_report(results)
    if args.format == "json":
        sys.stdout.write(document)
    else:
        print(text if text is not None else summary)


def _check_exit(reports, single: bool) -> int:
    if any(r.status == FAIL for r in reports):
        return EXIT_FAIL
    if single and any(r.status == REFUSED for r in reports):
        return EXIT_DATA
    return EXIT_OK


def run(args) -> int:
    cmd = args.command
    if cmd == "resolve-curve":
        tree, c = resolve(args.poly, max_blowups=args.max_blowups)
        if args.emit:
            with open(args.emit, "w") as fh:
                fh.write(emit_complex(c))
        results = {
            "polynomial": tree.polynomial.render(),
            "divisors": [
                {"id": d.id, "N": d.N, "nu": d.nu, "weight": frac_str(d.weight), "exceptional": d.exceptional}
                for d in c.vertices
            ],
            "intersections": [list(p) for p in tree.intersections],
        }
        if args.tree:
            results["tree"] = tree.to_json()
        lines = [f"resolution of {results['polynomial']} at the origin"]
        lines += [f"  {d['id']}: N = {d['N']}, nu = {d['nu']}, weight {d['weight']}" for d in results["divisors"]]
        lines += [f"  {a} meets {b}" for a, b in tree.intersections]
        if args.tree:
            for b in results["tree"]["blowups"]:
                lines.append(f"  blowup at {b['point']} (through {', '.join(b['through']) or 'nothing'}) -> {b['divisor']}")
        _output(args, results, "\n".join(lines))
        return EXIT_OK

    c = _load(args)
    if cmd == "zeta":
        res = _zeta_json(c, args.kind)
        text = res["factored"] if args.kind == "top" else res["rendered"]
        _output(args, {"zeta": args.kind, **res}, text)
    elif cmd == "poles":
        res = _poles(c, args.kind)
        lines = []
        for key, name in (("topological", "topological"), ("naive_specialized", "naive (specialized)")):
            if key in res:
                lines += _pole_lines(name, res[key])
        _output(args, res, "\n".join(lines))
    elif cmd == "lct":
        key = "lct" if c.mode == HYPERSURFACE else "min_weight"
        value = frac_str(minimal_value(c))
        _output(args, {key: value}, value)
    elif cmd == "weights":
        w = _weights_json(c)
        _output(args, {"weights": w}, "\n".join(f"{k}: {v}" for k, v in w.items()))
    elif cmd == "skeleton":
        if args.level is not None:
            try:
                level = Fraction(args.level)
            except (ValueError, ZeroDivisionError):
                raise UsageError(f"--level expects a rational number, got {args.level!r}") from None
            sub, what = level_subcomplex(c, level, over_x=c.mode == HYPERSURFACE), f"level <= {frac_str(level)}"
        elif args.exceptional:
            sub, what = exceptional_subcomplex(c, over_x=True), "exceptional"
        elif args.over_x:
            sub, what = over_x_subcomplex(c), "over x"
        else:
            sub, what = essential_skeleton(c), "essential"
        if args.emit:
            with open(args.emit, "w") as fh:
                fh.write(emit_complex(sub))
        res = {"skeleton": what, **_complex_summary(sub)}
        _output(args, res, f"{what}: {', '.join(res['cells']) or '(empty)'}; Euler characteristic {res['euler_characteristic']}")
    elif cmd == "collapse":
        source = _collapse_source(c, args.source)
        target = essential_skeleton(c)
        thresholds = None
        if args.thresholds:
            try:
                thresholds = [Fraction(t) for t in args.thresholds.split(",")]
            except (ValueError, ZeroDivisionError):
                raise UsageError(f"--thresholds expects rationals, got {args.thresholds!r}") from None
        if not target.cell_ids() <= source.cell_ids():
            raise InvalidComplexError("the essential skeleton is not contained in the chosen source")
        result = find_collapse(c, source.cell_ids(), target.cell_ids(), _budget(args), thresholds)
        res = {"status": result.status, "nodes": result.nodes, "reason": result.reason}
        lines = [f"collapse: {result.status}" + (f" ({result.reason})" if result.reason else "")]
        if result.status != "found" and c.mode == HYPERSURFACE and minimal_value(c) < 1:
            res["failure_mode"] = "not log canonical"
            lines.append("  expected failure mode: the germ is not log canonical (lct < 1)")
        if result.sequence is not None:
            res["steps"] = [s.to_json() for s in result.sequence.steps]
            lines += [f"  remove {s.face} with {s.coface}" for s in result.sequence.steps]
            if thresholds:
                checks = verify_simultaneous(c, result.sequence, thresholds)
                res["levels"] = [{"w": frac_str(k.threshold), "passed": k.passed, "reason": k.reason} for k in checks]
                lines += [f"  level {frac_str(k.threshold)}: {'PASS' if k.passed else 'FAIL'}" for k in checks]
        _output(args, res, "\n".join(lines))
    elif cmd == "check":
        budget = _budget(args)
        single = True
        if args.max_face:
            reports = [check_max_face(c)]
        elif args.veys:
            reports = [check_veys(c)]
        elif args.cy:
            reports = [check_cy(c)]
        elif args.collapse:
            reports = [check_level_collapse(c, budget)]
        else:
            reports, single = check_all(c, budget), False
        res = {r.checker: r.to_json() for r in reports}
        lines = [line for r in reports for line in r.summary_lines()]
        if any(r.checker == "veys" for r in reports):
            poles = _poles(c, "both")
            lines += _pole_lines("topological", poles["topological"])
            lines += _pole_lines("naive (specialized)", poles["naive_specialized"])
        _output(args, res, "\n".join(lines))
        return _check_exit(reports, single)
    elif cmd == "report":
        budget = _budget(args)
        res: dict = {"name": c.name, "mode": c.mode, "weights": _weights_json(c)}
        res["lct" if c.mode == HYPERSURFACE else "min_weight"] = frac_str(minimal_value(c))
        res["essential_skeleton"] = _complex_summary(essential_skeleton(c))
        if c.mode == HYPERSURFACE:
            res["skeleton_over_x"] = _complex_summary(over_x_subcomplex(c))
            res["zeta_top"] = _zeta_json(c, "top")
            res["zeta_naive"] = _zeta_json(c, "naive")
            res["poles"] = _poles(c, "both")
        reports = check_all(c, budget)
        res["checks"] = {r.checker: r.to_json() for r in reports}
        _output(args, res)
        return _check_exit(reports, False)
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # usage errors are data errors here; 2 means FAIL
        return EXIT_OK if not exc.code else EXIT_DATA
    try:
        return run(args)
    except (InvalidComplexError, ResolutionError, PolySyntaxError, UsageError, CollapseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        for v in getattr(exc, "violations", [])[:50]:
            print(f"  {v}", file=sys.stderr)
        return EXIT_DATA
    except Exception as exc:  # pragma: no cover - reported, never swallowed silently
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())

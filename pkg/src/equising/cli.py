"""Command-line front-end.

Exit codes: 0 success or holds, 1 a failing verdict, 2 undecided, 3 input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import numbers as nb
from .arcs import BRANCHES, analyze, branch_poly
from .corpus import run_corpus
from .family import DEFAULT_GRID, DEFAULT_K, check_family
from .flow import critical_arcs, euler_lemma_check, glued_field, integrate_flow, seeded_starts
from .parser import ParseError, parse_arc, parse_expression
from .polygon import relative_polygon
from .poly import FamilyPoly
from .puiseux import NotMiniRegular, mini_regular_order, puiseux_roots, shear_normalize

OK, FAILS, UNDECIDED, INPUT_ERROR = 0, 1, 2, 3


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(INPUT_ERROR)


def _rat(text):
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}") from exc


def _grid(text):
    return tuple(_rat(s) for s in text.split(",") if s.strip())


def _span(text):
    a, _, b = text.partition(":")
    if not b:
        raise argparse.ArgumentTypeError("expected a:b")
    return float(_rat(a)), float(_rat(b))


def build_parser():
    p = _Parser(prog="equising", description="Arc-space invariants and equisingularity checks "
                                             "for real plane curve germs and their families.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, family=False):
        sp.add_argument("expr", nargs="?", help="polynomial expression (or use --file)")
        sp.add_argument("--file", help="read the expression from a UTF-8 file")
        sp.add_argument("--precision", type=int, default=None, help="working precision in bits")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--format", choices=("json", "text"), default="json")
        if not family:
            sp.add_argument("--t", type=_rat, default=None, help="specialize a family at this t")
            sp.add_argument("--branch", choices=("pos", "neg", "both"), default="both")
        return sp

    sp = common(sub.add_parser("polygon", help="Newton polygon relative to an arc"))
    sp.add_argument("--arc", default="0", help="arc x = lambda(y), e.g. '-1/2*y+y^(4/3)'")
    sp = common(sub.add_parser("roots", help="Newton-Puiseux roots"))
    sp.add_argument("--depth", type=_rat, default=None, help="expansion depth in y")
    sp.add_argument("--denom-cap", type=int, default=None)
    common(sub.add_parser("bars", help="bars with initial forms"))
    common(sub.add_parser("critical", help="critical points and critical values"))
    common(sub.add_parser("cif", help="complete initial form"))

    sp = common(sub.add_parser("check-family", help="conditions (a), (A), (A')"), family=True)
    sp.add_argument("--t-grid", type=_grid, default=DEFAULT_GRID)
    sp.add_argument("--t-order", type=int, default=DEFAULT_K)
    sp.add_argument("--conditions", default="a,A,Aprime")

    sp = common(sub.add_parser("flow-check", help="level drift along the trivializing flow"),
                family=True)
    sp.add_argument("--starts", type=int, default=10)
    sp.add_argument("--wall", type=_rat, default=Fraction(1, 8))
    sp.add_argument("--t-span", type=_span, default=(0.0, 0.25))
    sp.add_argument("--rtol", type=float, default=1e-10)
    sp.add_argument("--atol", type=float, default=1e-12)
    sp.add_argument("--drift-tol", type=float, default=1e-6)

    sp = common(sub.add_parser("euler-check", help="order of |XW_X|+|YW_Y| for a weighted form"),
                family=True)
    sp.add_argument("--u0", type=_rat, required=True)
    sp.add_argument("--h", type=_rat, default=None, help="weight of X (inferred when possible)")

    sp = sub.add_parser("corpus", help="run the bundled families")
    sp.add_argument("--t-grid", type=_grid, default=DEFAULT_GRID)
    sp.add_argument("--t-order", type=int, default=DEFAULT_K)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--precision", type=int, default=None)
    sp.add_argument("--format", choices=("json", "text"), default="json")
    return p


def _read_expr(args):
    if args.file:
        with open(args.file, encoding="utf-8") as fh:
            return fh.read().strip()
    if not args.expr:
        raise InputError("an expression or --file is required")
    return args.expr


def _germ(args):
    """(f, shear) for the single-germ commands."""
    obj = parse_expression(_read_expr(args))
    if isinstance(obj, FamilyPoly):
        if args.t is None:
            raise InputError("expression involves t; pass --t")
        obj = obj.at(args.t)
    if not obj.dots():
        raise InputError("zero polynomial")
    if obj.coeff(0, 0) != 0:
        raise InputError("the germ must vanish at the origin")
    try:
        mini_regular_order(obj)
        return obj, Fraction(0)
    except NotMiniRegular:
        return shear_normalize(obj, args.seed)


def _family(args, K=DEFAULT_K):
    obj = parse_expression(_read_expr(args), K)
    if not isinstance(obj, FamilyPoly):
        if obj.coeff(0, 0) != 0:
            raise InputError("the germ must vanish at the origin")
        obj = FamilyPoly.constant(obj, K)
    return obj


def _branches(args):
    return BRANCHES if args.branch == "both" else (args.branch,)


def cmd_polygon(args):
    f, c = _germ(args)
    lam = parse_arc(args.arc)
    out = {}
    for b in _branches(args):
        out[b] = relative_polygon(branch_poly(f, b), lam).to_json()
    return {"shear": nb.fmt_rat(c), "polygons": out}, OK


def cmd_roots(args):
    if args.denom_cap:
        nb.DENOM_CAP = args.denom_cap
    f, c = _germ(args)
    res = []
    for b in _branches(args):
        bundle = puiseux_roots(branch_poly(f, b), args.depth)
        res.extend(dict(r, branch=b) for r in bundle.to_json())
    return {"shear": nb.fmt_rat(c), "roots": res}, OK


def cmd_bars(args):
    f, c = _germ(args)
    a = analyze(f, args.seed, _branches(args))
    return {"shear": nb.fmt_rat(c), "bars": [b.to_json() for b in a.bars]}, OK


def cmd_critical(args):
    f, c = _germ(args)
    a = analyze(f, args.seed, _branches(args))
    return {"shear": nb.fmt_rat(c), "critical": [p.to_json() for p in a.critical]}, OK


def cmd_cif(args):
    f, c = _germ(args)
    a = analyze(f, args.seed, _branches(args))
    return {"shear": nb.fmt_rat(c), "cif": a.complete_initial_form().to_json()}, OK


def _verdict_code(verdicts):
    if any(v.fails for v in verdicts):
        return FAILS
    if any(v.undecided for v in verdicts):
        return UNDECIDED
    return OK


def cmd_check_family(args):
    F = _family(args, args.t_order)
    conds = tuple(c.strip() for c in args.conditions.split(",") if c.strip())
    bad = [c for c in conds if c not in ("a", "A", "Aprime")]
    if bad:
        raise InputError(f"unknown condition(s): {', '.join(bad)}")
    if Fraction(0) not in args.t_grid:
        raise InputError("the t-grid must contain 0")
    verdicts = check_family(F, conds, args.t_grid, args.seed)
    return {"verdicts": [v.to_json() for v in verdicts]}, _verdict_code(verdicts)


def cmd_flow_check(args):
    F = _family(args)
    F, chains = critical_arcs(F, args.seed)
    field = glued_field(F, chains)
    trajs = [integrate_flow(field, p, args.t_span, float(args.wall), args.rtol, args.atol)
             for p in seeded_starts(args.starts, float(args.wall), args.seed)]
    bad = any(t.status != "ok" or not t.max_drift <= args.drift_tol for t in trajs)
    return {"trajectories": [t.to_json() for t in trajs]}, FAILS if bad else OK


def cmd_euler_check(args):
    W = parse_expression(_read_expr(args))
    if isinstance(W, FamilyPoly):
        raise InputError("a weighted form may not involve t")
    try:
        r = euler_lemma_check(W, args.u0, args.h)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    out = {"h": nb.fmt_rat(r["h"]), "d": nb.fmt_rat(r["d"]), "order": nb.fmt_rat(r["order"]),
           "unit_nonzero": r["unit_nonzero"]}
    ok = r["order"] == r["d"] and r["unit_nonzero"]
    return out, OK if ok else FAILS


def cmd_corpus(args):
    rows = run_corpus(args.t_order, args.t_grid, args.seed)
    sts = [r["status"] for r in rows]
    code = FAILS if "FAIL" in sts else (UNDECIDED if "UNDECIDED" in sts else OK)
    return {"families": rows}, code


COMMANDS = {
    "polygon": cmd_polygon, "roots": cmd_roots, "bars": cmd_bars, "critical": cmd_critical,
    "cif": cmd_cif, "check-family": cmd_check_family, "flow-check": cmd_flow_check,
    "euler-check": cmd_euler_check, "corpus": cmd_corpus,
}


def _config(args, bits):
    cfg = {k: v for k, v in vars(args).items() if k not in ("command", "expr", "file", "format")}
    cfg["precision"] = bits
    return {k: _jsonable(v) for k, v in sorted(cfg.items())}


def _jsonable(v):
    if isinstance(v, Fraction):
        return nb.fmt_rat(v)
    if isinstance(v, tuple):
        return [_jsonable(x) for x in v]
    return v


def dumps(obj):
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False)


def render_text(command, result):
    lines = []
    if command == "check-family":
        for v in result["verdicts"]:
            state = "holds" if v["holds"] else ("undecided" if v["undecided"] else "fails")
            lines.append(f"condition {v['condition']}: {state}")
            for w in v["witnesses"][:5]:
                desc = ", ".join(f"{k}={w[k]}" for k in ("kind", "dot", "coefficient", "t") if k in w)
                lines.append(f"  {w['status']}: {desc}")
    elif command == "corpus":
        for row in result["families"]:
            cs = " ".join(f"{c}={d['status']}" for c, d in row["conditions"].items())
            lines.append(f"{row['status']:9} {row['name']:26} {cs}")
    elif command == "flow-check":
        for t in result["trajectories"]:
            lines.append(f"start=({t['start'][0]}, {t['start'][1]}) drift={t['max_drift']} {t['status']}")
    else:
        lines.append(dumps(result))
    return "\n".join(lines)


def run(argv=None, out=None):
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    bits = args.precision or nb.default_precision()
    try:
        with nb.precision(bits):
            result, code = COMMANDS[args.command](args)
    except (ParseError, InputError, NotMiniRegular) as exc:
        print(f"equising: input error: {exc}", file=sys.stderr)
        return INPUT_ERROR
    report = {"command": args.command, "config": _config(args, bits), "result": result}
    if "expr" in vars(args) and (args.expr or args.file):
        report["input"] = _read_expr(args)
    if args.format == "text":
        out.write(render_text(args.command, result) + "\n")
    else:
        out.write(dumps(report) + "\n")
    return code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()

"""Bundled families with their expected verdicts."""

from __future__ import annotations

from .family import DEFAULT_GRID, check_family
from .parser import parse_expression

# (name, expression, expected verdict per condition: True holds, False fails)
FAMILIES = (
    ("constant-height", "x^3+3*t*x^2*y+3*t^2*x*y^2+t^3*y^3-y^4",
     {"a": True, "A": True, "Aprime": True}),
    ("uncleanable-dot", "x^3+3*t*x^2*y+t^3*y^3-y^4",
     {"a": False, "A": False, "Aprime": False}),
    ("splitting-critical-point", "x^4-t^2*x^2*y^2-y^4",
     {"a": False, "A": False, "Aprime": False}),
    ("moving-polygon", "x^2+2*x*y-t*y^2",
     {"a": True, "A": True, "Aprime": True}),
)


def _status(verdict, expected):
    if verdict.undecided:
        return "UNDECIDED"
    return "PASS" if verdict.holds == expected else "FAIL"


def run_corpus(K=8, grid=DEFAULT_GRID, seed=0):
    """[{name, expression, conditions: {c: {expected, holds, undecided, status}}, status}]."""
    rows = []
    for name, expr, expected in FAMILIES:
        F = parse_expression(expr, K)
        verdicts = check_family(F, tuple(expected), grid, seed)
        conds = {}
        for v in verdicts:
            conds[v.condition] = {"expected": "holds" if expected[v.condition] else "fails",
                                  "holds": v.holds, "undecided": v.undecided,
                                  "status": _status(v, expected[v.condition])}
        sts = [c["status"] for c in conds.values()]
        status = "FAIL" if "FAIL" in sts else ("UNDECIDED" if "UNDECIDED" in sts else "PASS")
        rows.append({"name": name, "expression": expr, "conditions": conds, "status": status,
                     "verdicts": [v.to_json() for v in verdicts]})
    return rows

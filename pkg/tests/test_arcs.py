from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from equising import numbers as nb, upoly
from equising.arcs import (AtLeast, analyze, b_roots, candidate_sequence, complete_initial_form,
                           contact_order, critical_points, enumerate_bars, f_height, generic_coordinate,
                           initial_form)
from equising.numbers import INF, TSeries
from equising.parser import parse_expression
from equising.puiseux import puiseux_roots
from equising.series import PuiseuxSeries

from helpers import random_germ, rng_for

CUSP = parse_expression("x^2-y^3")
QUARTIC = parse_expression("x^4-y^4")
SHIFTED = parse_expression("(x+1/2*y)^3-y^4")


def ps(*terms, trunc=INF):
    return PuiseuxSeries(terms, trunc)


def test_contact_order():
    y2 = ps((2, 1))
    assert contact_order(y2, y2) == INF
    assert contact_order(y2, ps()) == 2
    assert contact_order(ps((Fraction(3, 2), 1)), ps((Fraction(3, 2), -1))) == Fraction(3, 2)
    assert contact_order(ps((Fraction(3, 2), 1), (2, -2)), ps()) == Fraction(3, 2)
    assert contact_order(ps((1, TSeries([0, -1], 8))), ps()) == 1
    lo = contact_order(ps((1, 1), trunc=3), ps((1, 1)))
    assert isinstance(lo, AtLeast) and lo == 3


def test_f_height():
    roots = puiseux_roots(CUSP)
    assert f_height(CUSP, ps(), roots) == Fraction(3, 2)
    assert f_height(CUSP, ps((Fraction(3, 2), 1)), roots) == INF
    assert f_height(CUSP, ps((1, 1)), roots) == 1


def _bar_summary(bars, branch="pos"):
    return [(b.prefix.terms, b.height, b.I, b.L, b.m, b.polar, b.singleton)
            for b in bars if b.branch == branch]


def test_bars_of_cusp():
    bars = enumerate_bars(CUSP)
    pos = _bar_summary(bars)
    assert (((), Fraction(3, 2), (-1, 0, 1), 3, 2, True, False)) in pos
    singles = [b for b in bars if b.singleton and b.branch == "pos"]
    assert len(singles) == 2 and all(b.m == 1 and not b.polar for b in singles)
    # y < 0 gives x^2 + y^3: no real roots, one polar bar
    neg = _bar_summary(bars, "neg")
    assert neg == [((), Fraction(3, 2), (1, 0, 1), 3, 2, True, False)]


def test_bars_of_quartic_and_shifted_cube():
    q = [b for b in enumerate_bars(QUARTIC) if not b.singleton and b.branch == "pos"]
    assert [(b.height, b.I, b.L, b.m, b.polar) for b in q] == [(1, (-1, 0, 0, 0, 1), 4, 4, True)]
    s = [b for b in enumerate_bars(SHIFTED) if not b.singleton and b.branch == "pos"]
    assert len(s) == 1
    b = s[0]
    assert b.prefix.terms == ((1, Fraction(-1, 2)),)
    assert (b.height, b.I, b.L, b.m, b.polar) == (Fraction(4, 3), (-1, 0, 0, 1), 4, 3, True)


def test_initial_forms():
    bar = [b for b in enumerate_bars(CUSP) if not b.singleton and b.branch == "pos"][0]
    assert initial_form(CUSP, bar) == ((-1, 0, 1), 3)
    f = parse_expression("x^2+2*x*y-t*y^2").at(Fraction(1, 4))
    assert initial_form(f, ps(), 1) == ((Fraction(-1, 4), 2, 1), 2)


def test_b_roots_of_derivative():
    bar = [b for b in enumerate_bars(CUSP) if not b.singleton and b.branch == "pos"][0]
    assert [(c, m) for c, m, _ in b_roots(CUSP, bar, "fx")] == [(0, 1)]
    split = parse_expression("x^4 - t^2*x^2*y^2 - y^4")
    g = split.at(Fraction(1, 2))
    bar = [b for b in enumerate_bars(g) if not b.singleton and b.branch == "pos"][0]
    xs = b_roots(g, bar, "fx")
    vals = sorted(nb.real_value(c) for c, _, _ in xs)
    assert vals == pytest.approx([-(1 / 8) ** 0.5, 0, (1 / 8) ** 0.5])
    bar0 = [b for b in enumerate_bars(split.at(0)) if not b.singleton and b.branch == "pos"][0]
    assert [(c, m) for c, m, _ in b_roots(split.at(0), bar0, "fx")] == [(0, 3)]


def test_critical_points_examples():
    pts = critical_points(CUSP)
    assert sorted(p.branch for p in pts) == ["neg", "pos"]
    for p in pts:
        assert (p.coordinate, p.mult, p.bar.height) == (0, 1, Fraction(3, 2))
        assert p.value == ((-1 if p.branch == "pos" else 1), 3)
        # dI/du vanishes at c while I does not
        assert upoly.evaluate(upoly.deriv(p.bar.I), p.coordinate) == 0 != upoly.evaluate(p.bar.I, p.coordinate)
    q = [p for p in critical_points(QUARTIC) if p.branch == "pos"]
    assert [(p.coordinate, p.mult, p.value) for p in q] == [(0, 3, (-1, 4))]
    m = [p for p in critical_points(parse_expression("x^2+2*x*y")) if p.branch == "pos"]
    assert [(p.coordinate, p.mult, p.value) for p in m] == [(-1, 1, (-1, 2))]


def test_critical_point_of_shifted_cube():
    pts = [p for p in critical_points(SHIFTED) if p.branch == "pos"]
    assert len(pts) == 1
    p = pts[0]
    assert p.bar.prefix.terms == ((1, Fraction(-1, 2)),) and p.bar.height == Fraction(4, 3)
    assert (p.coordinate, p.mult, p.value) == (0, 2, (-1, 4))


def test_generic_coordinate_rules():
    seq = candidate_sequence(0)
    bar = enumerate_bars(CUSP)[0]
    assert generic_coordinate(bar, [], 0) == seq[0]
    first = seq[0]
    assert generic_coordinate(bar, [first], 0) == next(r for r in seq if abs(r - first) > Fraction(1, 64))
    a = generic_coordinate(bar, [], 0)
    b = generic_coordinate(bar, [a], 0)
    assert a != b
    assert candidate_sequence(0) == candidate_sequence(0)
    assert candidate_sequence(0) != candidate_sequence(1)


def test_generic_points_are_distinct_across_bars():
    f = parse_expression("(x^2-y^2)*(x^2-4*y^2)")
    gen = [p.coordinate for p in critical_points(f) if p.generic]
    assert len(gen) == len(set(gen))


def test_complete_initial_form():
    cif = complete_initial_form(CUSP)
    assert [(b.branch, b.height, I) for b, I in cif.entries] == [
        ("pos", Fraction(3, 2), (-1, 0, 1)), ("neg", Fraction(3, 2), (1, 0, 1))]
    xm = analyze(parse_expression("x^3"))
    bars = xm.bars
    assert all(b.singleton for b in bars)
    assert [b.m for b in bars if b.branch == "pos"] == [3]
    assert all(b.polar for b in bars)


@given(st.integers(0, 10 ** 6))
@settings(max_examples=30, deadline=None)
def test_critical_points_are_zeros_of_the_derivative(seed):
    f = random_germ(rng_for(seed), max_xdeg=5)
    for p in analyze(f).critical:
        if p.generic or p.coordinate is None:
            continue
        d = upoly.evaluate(upoly.deriv(p.bar.I), p.coordinate)
        assert nb.to_acb(d).contains(0)
        assert nb.is_real(p.coordinate)

"""Puiseux series, bivariate polynomials, arc substitution and relative polygons."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from equising import numbers as nb
from equising.numbers import INF, TSeries
from equising.parser import parse_expression
from equising.poly import BivarPoly, substitute_arc
from equising.polygon import (dots_below, edge_line, edge_polynomial, polygon_of, polygon_of_dots,
                              relative_polygon, vanishing_class)
from equising.series import PuiseuxSeries

from helpers import sympy_substitute

Y32 = PuiseuxSeries([(Fraction(3, 2), 1)])

exps = st.fractions(min_value=0, max_value=4, max_denominator=3)
coefs = st.fractions(min_value=-4, max_value=4, max_denominator=4)
series = st.builds(PuiseuxSeries, st.lists(st.tuples(exps, coefs), max_size=4))
bivar = st.builds(lambda d: BivarPoly(d), st.dictionaries(
    st.tuples(st.integers(0, 3), st.integers(0, 3).map(Fraction)), coefs, max_size=5))


@given(series, series, series)
@settings(max_examples=60, deadline=None)
def test_series_ring_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a


@given(bivar, bivar, bivar)
@settings(max_examples=40, deadline=None)
def test_bivar_ring_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c


@given(bivar, st.lists(st.tuples(st.sampled_from([1, Fraction(3, 2), 2]), coefs), max_size=2))
@settings(max_examples=40, deadline=None)
def test_substitution_round_trip(F, terms):
    lam = PuiseuxSeries(terms)
    assert substitute_arc(substitute_arc(F, lam), -lam) == F


def test_contact_order_of_series():
    assert PuiseuxSeries([]).order() == INF
    assert PuiseuxSeries([(Fraction(3, 2), 1), (2, -2)]).order() == Fraction(3, 2)
    rho = PuiseuxSeries([(1, TSeries([0, -1], 8))])
    assert rho.order() == 1


def test_series_truncation():
    s = PuiseuxSeries([(1, 1), (3, 5)], trunc=2)
    assert s.terms == ((Fraction(1), 1),)
    with pytest.raises(nb.InsufficientDepth):
        s.coeff(2)
    assert (s * s).trunc == 3


def test_substitute_identity_and_half_power():
    f = parse_expression("x^2 - y^3")
    assert substitute_arc(f, PuiseuxSeries([])) == f
    assert substitute_arc(f, Y32) == BivarPoly({(2, 0): 1, (1, Fraction(3, 2)): 2})


def test_substitute_family_against_sympy():
    F = parse_expression("x^2+2*x*y-t*y^2")
    G = substitute_arc(F.poly, PuiseuxSeries([(1, Fraction(-1))]))
    assert G.terms == {(2, 0): TSeries([1], 8), (0, 2): TSeries([-1, -1], 8)}
    oracle = sympy_substitute("x^2+2*x*y-t*y^2", "-y")
    assert {k: str(v) for k, v in oracle.items()} == {(2, 0): "1", (0, 2): "-t - 1"}


def test_polygon_examples():
    f = parse_expression("x^2 - y^3")
    P = relative_polygon(f, PuiseuxSeries([]))
    assert P.vertices == ((2, 0), (0, 3))
    assert P.edges[0].tan == Fraction(3, 2)
    assert vanishing_class(P) == "nonvanishing"
    Q = relative_polygon(f, Y32)
    assert Q.vertices == ((2, 0), (1, Fraction(3, 2)))
    assert vanishing_class(Q) == "vanishes_on_arc"
    assert edge_line(Q, 1)[2] == 3
    assert vanishing_class(polygon_of(parse_expression("x^2"))) == "singular_on_arc"


def test_absolute_polygon_moves_with_t():
    F = parse_expression("x^2+2*x*y-t*y^2")
    assert polygon_of(F.at(0)).vertices == ((2, 0), (1, 1))
    assert polygon_of(F.at(Fraction(1, 2))).vertices == ((2, 0), (0, 2))


def test_edge_line_and_dots_below():
    P = polygon_of_dots([(3, 0), (0, 4)])
    line = edge_line(P, 1)
    assert line[1:] == (Fraction(4, 3), 4)
    assert dots_below([(1, 2), (0, 3), (2, 2), (0, 4)], line) == [(0, 3), (1, 2)]
    assert dots_below([], line) == []
    with pytest.raises(IndexError):
        edge_line(P, 2)


def test_edge_polynomial():
    G = parse_expression("x^2 + 2*x*y + y^2 + y^3")
    P = polygon_of(G)
    assert edge_polynomial(G, P.edges[0]) == [1, 2, 1]


dots = st.lists(st.tuples(st.integers(0, 5), st.fractions(0, 6, max_denominator=2)), min_size=1, max_size=8)


@given(dots)
@settings(max_examples=100, deadline=None)
def test_hull_supports_every_dot(ds):
    P = polygon_of_dots(ds)
    ds = set((i, Fraction(q)) for i, q in ds)
    assert set(P.vertices) <= ds
    ms = [m for m, _ in P.vertices]
    assert ms == sorted(ms, reverse=True) and len(set(ms)) == len(ms)
    for k in range(1, len(P.edges) + 1):
        assert not dots_below(ds, edge_line(P, k))
    tans = [e.tan for e in P.edges]
    assert tans == sorted(tans)
    assert P.vertices[0][1] == min(q for _, q in ds)


def test_truncated_input_raises_when_polygon_is_not_determined():
    G = BivarPoly({(2, 0): 1}, trunc=Fraction(1))
    with pytest.raises(nb.InsufficientDepth):
        polygon_of(G)

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from equising.parser import ParseError, parse_arc, parse_expression, render
from equising.poly import BivarPoly, FamilyPoly
from equising.series import PuiseuxSeries


def test_plain_polynomial():
    f = parse_expression("x^2 - y^3")
    assert isinstance(f, BivarPoly)
    assert f == BivarPoly({(2, 0): 1, (0, 3): -1})


def test_family_of_constant_height():
    F = parse_expression("x^3+3*t*x^2*y+3*t^2*x*y^2+t^3*y^3-y^4")
    assert isinstance(F, FamilyPoly)
    assert F.tpoly[(2, Fraction(1))] == (0, 3)
    assert F.tpoly[(0, Fraction(3))] == (0, 0, 0, 1)
    assert F.at(0) == BivarPoly({(3, 0): 1, (0, 4): -1})


def test_splitting_family():
    F = parse_expression("x^4 - t^2*x^2*y^2 - y^4")
    assert F.at(Fraction(1, 2)) == BivarPoly({(4, 0): 1, (2, 2): Fraction(-1, 4), (0, 4): -1})


def test_products_and_parentheses_expand():
    assert parse_expression("(x+y)^2") == parse_expression("x^2+2*x*y+y^2")
    assert parse_expression("-(x - y)*(x + y)") == parse_expression("y^2 - x^2")
    assert parse_expression("1/2*x*y") == BivarPoly({(1, 1): Fraction(1, 2)})
    assert parse_expression(" 2 * x *y ") == parse_expression("2*x*y")


@pytest.mark.parametrize("bad", ["", "x^", "x^-1", "x + * y", "z", "x^(1/2)", "(x", "x/y", "x^2 )"])
def test_rejects_malformed_input(bad):
    with pytest.raises(ParseError):
        parse_expression(bad)


def test_parse_error_carries_position():
    with pytest.raises(ParseError) as info:
        parse_expression("x + + q")
    assert info.value.pos >= 0


def test_arc_syntax():
    assert parse_arc("-1/2*y + y^(4/3)") == PuiseuxSeries([(1, Fraction(-1, 2)), (Fraction(4, 3), 1)])
    assert parse_arc("y^(3/2)") == PuiseuxSeries([(Fraction(3, 2), 1)])
    for bad in ("x", "t*y", "1", "y^(-1/2)"):
        with pytest.raises(ParseError):
            parse_arc(bad)


monomial = st.tuples(st.integers(0, 4), st.integers(0, 4), st.integers(0, 2))
coeff = st.fractions(min_value=-9, max_value=9, max_denominator=5).filter(lambda c: c != 0)


@given(st.dictionaries(monomial, coeff, min_size=1, max_size=6))
@settings(max_examples=80, deadline=None)
def test_render_then_parse_is_identity(mons):
    mons = {k: c for k, c in mons.items() if k[:2] != (0, 0)}
    if not mons:
        return
    if any(k[2] for k in mons):
        tp = {}
        for (i, j, k), c in mons.items():
            cs = tp.setdefault((i, j), [0] * 3)
            cs[k] = c
        p = FamilyPoly(tp)
        q = parse_expression(render(p))
        assert q.tpoly == p.tpoly
    else:
        p = BivarPoly({(i, j): c for (i, j, _), c in mons.items()})
        assert parse_expression(render(p)) == p

"""Seeded generators and independent oracles shared by the test modules."""

import random
from fractions import Fraction

import flint
import sympy

from equising import numbers as nb
from equising.poly import BivarPoly
from equising.series import PuiseuxSeries

NONZERO = (-3, -2, -1, 1, 2, 3)


def random_germ(rng, max_xdeg=6):
    """Mini-regular germ: x^m present, every other dot has i + j >= m."""
    n = rng.randint(1, max_xdeg)
    m = rng.randint(1, n)
    terms = {(m, Fraction(0)): Fraction(rng.choice(NONZERO))}
    for _ in range(rng.randint(1, 4)):
        i = rng.randint(0, n)
        j = rng.randint(max(0, m - i), m + 4)
        if (i, j) == (m, 0) or i + j == 0:
            continue
        terms[(i, Fraction(j))] = Fraction(rng.randint(-3, 3))
    terms = {k: c for k, c in terms.items() if c}
    if len(terms) == 1:
        terms[(0, Fraction(m + rng.randint(0, 3)))] = Fraction(rng.choice((-1, 1)))
    return BivarPoly(terms)


def random_family_text(rng, max_xdeg=4, max_tdeg=2, extra=(1, 3)):
    """Family that stays mini-regular of the same order for every t."""
    n = rng.randint(1, max_xdeg)
    m = rng.randint(1, n)
    parts = [f"{rng.choice(NONZERO)}*x^{m}"]
    for _ in range(rng.randint(*extra)):
        i = rng.randint(0, n)
        j = rng.randint(max(0, m - i), m + 3)
        if (i, j) == (m, 0) or i + j == 0:
            continue
        tp = "+".join(f"({rng.randint(-2, 2)})*t^{e}" for e in range(rng.randint(0, max_tdeg) + 1))
        parts.append(f"({tp})*x^{i}*y^{j}")
    parts.append(f"({rng.choice((-1, 1))}+({rng.randint(-2, 2)})*t)*y^{m + rng.randint(0, 3)}")
    return "+".join(parts)


def random_arc(rng):
    pool = [Fraction(1), Fraction(4, 3), Fraction(3, 2), Fraction(2), Fraction(5, 2), Fraction(3)]
    exps = sorted(rng.sample(pool, rng.randint(1, 3)))
    return PuiseuxSeries([(e, Fraction(rng.randint(-3, 3), rng.randint(1, 2))) for e in exps])


def random_weighted_form(rng):
    """(W, h, d): sum of c_i X^i Y^(d - i h) with at least the top column nonzero."""
    h = Fraction(rng.randint(1, 5), rng.randint(1, 3))
    n = rng.randint(1, 5)
    d = n * h + rng.randint(0, 3)
    terms = {(n, d - n * h): Fraction(rng.choice(NONZERO))}
    for i in range(n):
        c = rng.randint(-3, 3)
        if c:
            terms[(i, d - i * h)] = Fraction(c)
    return BivarPoly(terms), h, d


def sympy_substitute(expr_text, shift_text):
    """Independent expansion of F(X + shift, Y) with sympy, as {(i, j): coeff in t}."""
    x, y, t, X, Y = sympy.symbols("x y t X Y")
    F = sympy.sympify(expr_text.replace("^", "**"), locals={"x": x, "y": y, "t": t})
    G = sympy.expand(F.subs({x: X + sympy.sympify(shift_text, locals={"y": Y, "t": t}), y: Y}))
    out = {}
    for (i, j), c in sympy.Poly(G, X, Y).terms():
        out[(i, j)] = sympy.expand(c)
    return out


def product_coefficients(roots, lead):
    """Coefficients (low to high) of lead * prod (u - z)^mult as acb balls."""
    prod = [flint.acb(1)]
    for z, mult, _ in roots:
        zz = nb.to_acb(z)
        for _ in range(mult):
            nxt = [flint.acb(0)] * (len(prod) + 1)
            for k, c in enumerate(prod):
                nxt[k + 1] += c
                nxt[k] -= zz * c
            prod = nxt
    lead = nb.to_acb(lead)
    return [lead * c for c in prod]


def ball_close(a, b, tol=1e-20):
    d = a - b
    return d.contains(0) and float(abs(d).mid()) + float(abs(d).rad()) <= tol


def rng_for(seed):
    return random.Random(seed)

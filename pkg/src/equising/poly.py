"""Bivariate polynomials with fractional y-exponents, families, and arc substitution."""

from __future__ import annotations

import math
from fractions import Fraction

from . import numbers as nb
from .numbers import INF, TSeries
from .series import PuiseuxSeries


class BivarPoly:
    """Sum of a_{iq} X^i Y^q with integer i >= 0 and rational q >= 0.

    ``trunc`` bounds the y-exponents that are known (INF when exact).
    """

    __slots__ = ("terms", "trunc")

    def __init__(self, terms=None, trunc=INF):
        acc = {}
        for (i, q), c in (terms or {}).items() if isinstance(terms, dict) else (terms or ()):
            q = Fraction(q)
            if q >= trunc:
                continue
            key = (int(i), q)
            acc[key] = acc[key] + c if key in acc else c
        self.terms = {k: c for k, c in acc.items() if not nb.is_structural_zero(c)}
        self.trunc = trunc

    def coeff(self, i, q):
        return self.terms.get((i, Fraction(q)), Fraction(0))

    def __add__(self, o):
        return BivarPoly(list(self.terms.items()) + list(o.terms.items()), min(self.trunc, o.trunc))

    def __neg__(self):
        return BivarPoly({k: -c for k, c in self.terms.items()}, self.trunc)

    def __sub__(self, o):
        return self + (-o)

    def _min_q(self):
        return min((q for _, q in self.terms), default=self.trunc)

    def __mul__(self, o):
        if not isinstance(o, BivarPoly):
            return BivarPoly({k: c * o for k, c in self.terms.items()}, self.trunc)
        trunc = min(self.trunc + o._min_q(), o.trunc + self._min_q())
        acc = {}
        for (i1, q1), c1 in self.terms.items():
            for (i2, q2), c2 in o.terms.items():
                k = (i1 + i2, q1 + q2)
                if k[1] >= trunc:
                    continue
                acc[k] = acc[k] + c1 * c2 if k in acc else c1 * c2
        return BivarPoly(acc, trunc)

    __rmul__ = __mul__

    def __pow__(self, n):
        r = BivarPoly({(0, 0): Fraction(1)})
        for _ in range(n):
            r = r * self
        return r

    def __eq__(self, o):
        if not isinstance(o, BivarPoly):
            return NotImplemented
        return self.trunc == o.trunc and self.terms == o.terms

    def __hash__(self):
        return hash((frozenset(self.terms.items()), self.trunc))

    def map(self, fn):
        return BivarPoly({k: fn(c) for k, c in self.terms.items()}, self.trunc)

    def dx(self):
        return BivarPoly({(i - 1, q): i * c for (i, q), c in self.terms.items() if i > 0}, self.trunc)

    def dy(self):
        return BivarPoly({(i, q - 1): q * c for (i, q), c in self.terms.items() if q != 0},
                         self.trunc - 1 if self.trunc != INF else INF)

    def x_degree(self):
        return max((i for i, _ in self.terms), default=-1)

    def is_zero(self):
        return not self.dots()

    def dots(self):
        """Sorted support after exact zero tests."""
        return sorted(k for k, c in self.terms.items() if not nb.is_zero(c))

    def multiplicity(self):
        return min((i + q for i, q in self.dots()), default=INF)

    def flip_y(self):
        """f(x, -y); requires integer y-exponents."""
        out = {}
        for (i, q), c in self.terms.items():
            if q.denominator != 1:
                raise ValueError("y -> -y needs integer y-exponents")
            out[(i, q)] = -c if q.numerator % 2 else c
        return BivarPoly(out, self.trunc)

    def column(self, i):
        """Coefficient of X^i as a series in Y."""
        return PuiseuxSeries([(q, c) for (j, q), c in self.terms.items() if j == i], self.trunc)

    def evaluate(self, x, y):
        """Numeric value at (x, y) for a numeric type closed under + and *."""
        total = 0
        for (i, q), c in self.terms.items():
            yq = y ** int(q) if q.denominator == 1 else y ** float(q)
            total = total + c * x ** i * yq
        return total

    def truncate_y(self, T):
        return BivarPoly(self.terms, min(self.trunc, T))

    def __repr__(self):
        return f"BivarPoly({render_terms(self.terms)})"


def render_terms(terms):
    from .parser import render_monomials
    if all(isinstance(c, Fraction) for c in terms.values()):
        return render_monomials({(i, q, 0): c for (i, q), c in terms.items()})
    parts = []
    for (i, q), c in sorted(terms.items(), key=lambda kv: (-kv[0][0], kv[0][1])):
        cs = c.render() if hasattr(c, "render") else repr(c)
        parts.append(f"({cs})*x^{i}*y^{nb.fmt_rat(q)}")
    return " + ".join(parts) or "0"


def substitute_arc(F, lam):
    """F(X + lam(Y), Y), expanded exactly up to the truncation it inherits."""
    if not isinstance(lam, PuiseuxSeries):
        lam = PuiseuxSeries(lam)
    if not lam.terms and lam.trunc == INF:
        return BivarPoly(F.terms, F.trunc)
    n = F.x_degree()
    powers = [PuiseuxSeries([(0, Fraction(1))])]
    for _ in range(n):
        powers.append(powers[-1] * lam)
    acc = {}
    trunc = F.trunc
    for (i, q), a in F.terms.items():
        for k in range(i + 1):
            p = powers[i - k]
            trunc = min(trunc, q + p.trunc)
            binom = math.comb(i, k)
            for e, c in p.terms:
                key = (k, q + e)
                v = a * c * binom
                acc[key] = acc[key] + v if key in acc else v
    return BivarPoly(acc, trunc)


def shift_x(F, c):
    """F(X + c, Y) for a constant c."""
    return substitute_arc(F, PuiseuxSeries([(0, c)]))


class FamilyPoly:
    """F(x, y; t) with polynomial dependence on t, viewed over Q[t]/(t^K)."""

    def __init__(self, tpoly, K=8):
        # tpoly: {(i, q): [c_0, c_1, ...]} coefficients in t, exact rationals
        clean = {}
        for (i, q), cs in tpoly.items():
            cs = [Fraction(c) for c in cs]
            while cs and cs[-1] == 0:
                cs.pop()
            if cs:
                clean[(int(i), Fraction(q))] = tuple(cs)
        if (0, Fraction(0)) in clean:
            raise ValueError("family must vanish at the origin for all t: constant term present")
        self.tpoly = clean
        self.K = K
        self.poly = BivarPoly({k: TSeries(cs, K) for k, cs in clean.items()})

    def with_order(self, K):
        return FamilyPoly(self.tpoly, K)

    @classmethod
    def constant(cls, f, K=8):
        """The family equal to f for every t."""
        return cls({k: (c,) for k, c in f.terms.items()}, K)

    def at(self, t0):
        t0 = Fraction(t0)
        out = {}
        for k, cs in self.tpoly.items():
            v = Fraction(0)
            for c in reversed(cs):
                v = v * t0 + c
            out[k] = v
        return BivarPoly(out)

    def t_degree(self):
        return max((len(cs) - 1 for cs in self.tpoly.values()), default=0)

    def flip_y(self):
        out = {}
        for (i, q), cs in self.tpoly.items():
            if q.denominator != 1:
                raise ValueError("y -> -y needs integer y-exponents")
            out[(i, q)] = tuple(-c for c in cs) if q.numerator % 2 else cs
        return FamilyPoly(out, self.K)

    def dx(self):
        out = {(i - 1, q): tuple(i * c for c in cs) for (i, q), cs in self.tpoly.items() if i > 0}
        out.pop((0, Fraction(0)), None)
        return FamilyPoly(out, self.K)

    def shear(self, c):
        """F(x + c y, y; t) for a rational c."""
        out = {}
        for (i, q), cs in self.tpoly.items():
            for k in range(i + 1):
                coef = math.comb(i, k) * Fraction(c) ** (i - k)
                key = (k, q + i - k)
                prev = out.get(key, ())
                n = max(len(prev), len(cs))
                out[key] = tuple((prev[j] if j < len(prev) else 0) + (coef * cs[j] if j < len(cs) else 0)
                                 for j in range(n))
        return FamilyPoly(out, self.K)

    def is_constant(self):
        return all(len(cs) <= 1 for cs in self.tpoly.values())

    def __eq__(self, o):
        return isinstance(o, FamilyPoly) and self.tpoly == o.tpoly and self.K == o.K

    def __hash__(self):
        return hash((frozenset(self.tpoly.items()), self.K))

    def __repr__(self):
        from .parser import render_monomials
        mons = {}
        for (i, q), cs in self.tpoly.items():
            for k, c in enumerate(cs):
                if c:
                    mons[(i, q, k)] = c
        return f"FamilyPoly({render_monomials(mons)}, K={self.K})"

"""Truncated fractional power series in y."""

from __future__ import annotations

import math
from fractions import Fraction

from . import numbers as nb
from .numbers import INF


def _lcm_denoms(exps):
    d = 1
    for e in exps:
        d = d * e.denominator // math.gcd(d, e.denominator)
    return d


class PuiseuxSeries:
    """Sum of c_e y^e over finitely many rational e, known below ``trunc``.

    ``trunc`` is INF for an exact (finite) series.  Exact zero coefficients are
    never stored; a ball coefficient straddling zero is kept since its status
    is unknown.
    """

    __slots__ = ("terms", "trunc")

    def __init__(self, terms=(), trunc=INF):
        if isinstance(terms, dict):
            terms = terms.items()
        acc = {}
        for e, c in terms:
            e = Fraction(e)
            if e >= trunc:
                continue
            acc[e] = acc[e] + c if e in acc else c
        self.terms = tuple(sorted((e, c) for e, c in acc.items() if not nb.is_structural_zero(c)))
        self.trunc = trunc if trunc == INF else Fraction(trunc)
        d = self.denom
        if d > nb.DENOM_CAP:
            raise nb.DenominatorCapExceeded(f"exponent denominator {d} exceeds cap {nb.DENOM_CAP}")

    @classmethod
    def monomial(cls, c, e):
        return cls([(e, c)])

    @property
    def denom(self):
        exps = [e for e, _ in self.terms]
        if self.trunc != INF:
            exps.append(self.trunc)
        return _lcm_denoms(exps)

    def exponents(self):
        return [e for e, _ in self.terms]

    def coeff(self, e):
        e = Fraction(e)
        if e >= self.trunc:
            raise nb.InsufficientDepth(f"coefficient of y^{e} beyond truncation {self.trunc}")
        for f, c in self.terms:
            if f == e:
                return c
        return Fraction(0)

    def low_exponent(self):
        """Least stored exponent (a lower bound for the order); INF if none."""
        return self.terms[0][0] if self.terms else self.trunc

    def order(self):
        """Least exponent with nonzero coefficient; INF for the zero series."""
        for e, c in self.terms:
            if not nb.is_zero(c):
                return e
        return INF

    def is_exact(self):
        return self.trunc == INF and all(nb.is_exact(c) for _, c in self.terms)

    def truncate(self, e):
        return PuiseuxSeries(self.terms, min(self.trunc, Fraction(e)) if e != INF else self.trunc)

    def _coerce(self, o):
        if isinstance(o, PuiseuxSeries):
            return o
        return PuiseuxSeries([(0, o)])

    def __add__(self, o):
        o = self._coerce(o)
        return PuiseuxSeries(list(self.terms) + list(o.terms), min(self.trunc, o.trunc))

    __radd__ = __add__

    def __neg__(self):
        return PuiseuxSeries([(e, -c) for e, c in self.terms], self.trunc)

    def __sub__(self, o):
        return self + (-self._coerce(o))

    def __rsub__(self, o):
        return self._coerce(o) + (-self)

    def scale(self, k):
        return PuiseuxSeries([(e, k * c) for e, c in self.terms], self.trunc)

    def shift(self, q):
        """Multiply by y^q."""
        return PuiseuxSeries([(e + q, c) for e, c in self.terms], self.trunc + q)

    def __mul__(self, o):
        if not isinstance(o, PuiseuxSeries):
            return self.scale(o)
        la, lb = self.low_exponent(), o.low_exponent()
        trunc = min(self.trunc + lb, o.trunc + la)
        acc = {}
        for e1, c1 in self.terms:
            for e2, c2 in o.terms:
                e = e1 + e2
                if e >= trunc:
                    continue
                acc[e] = acc[e] + c1 * c2 if e in acc else c1 * c2
        return PuiseuxSeries(acc, trunc)

    def __rmul__(self, o):
        return self.scale(o)

    def __pow__(self, n):
        r = PuiseuxSeries([(0, Fraction(1))])
        base = self
        while n:
            if n & 1:
                r = r * base
            n >>= 1
            if n:
                base = base * base
        return r

    def map(self, fn):
        return PuiseuxSeries([(e, fn(c)) for e, c in self.terms], self.trunc)

    def derivative(self):
        return PuiseuxSeries([(e - 1, e * c) for e, c in self.terms if e != 0],
                             self.trunc - 1 if self.trunc != INF else INF)

    def __eq__(self, o):
        if not isinstance(o, PuiseuxSeries):
            return NotImplemented
        return self.trunc == o.trunc and self.terms == o.terms

    def __hash__(self):
        return hash((self.terms, self.trunc))

    def __repr__(self):
        return f"PuiseuxSeries({self.render()})"

    def render(self):
        parts = []
        for e, c in self.terms:
            cs = nb.fmt_rat(c) if isinstance(c, Fraction) else (c.render() if hasattr(c, "render") else repr(c))
            parts.append(f"({cs})*y^{nb.fmt_rat(e)}")
        s = " + ".join(parts) if parts else "0"
        if self.trunc != INF:
            s += f" + O(y^{nb.fmt_rat(self.trunc)})"
        return s

    def to_json(self):
        return [[nb.fmt_rat(e), *nb.ball_fields(c)] for e, c in self.terms]


def order_y(s):
    return s.order()

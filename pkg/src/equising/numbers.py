"""Coefficient domains.

Three kinds of coefficients appear throughout the package:

* exact algebraic numbers: ``Fraction`` for rationals and ``AlgNum`` for
  elements of a number field Q(theta) with a fixed complex embedding;
* ``TSeries``: polynomials in the family parameter t truncated at order K,
  with exact coefficients;
* ``Ball``: complex balls with outward rounding, used when no exact
  representation is available.

Zero tests are exact for the first two kinds.  A ball is zero only when it is
the exact zero ball; a ball straddling zero raises ``UndecidableZero`` so the
caller can raise the working precision.
"""

from __future__ import annotations

import contextlib
import math
import os
from fractions import Fraction

import flint

INF = math.inf
BASE_PREC = 128
PREC_CAP = 4096
DENOM_CAP = 512


def default_precision():
    return int(os.environ.get("EQUISING_PRECISION", BASE_PREC))


class UndecidableZero(ArithmeticError):
    """A zero test could not be decided at the current precision."""


class TruncationUndecided(UndecidableZero):
    """A t-series vanishes modulo t^K but its true value is unknown."""


class IncompatibleDomains(TypeError):
    pass


class DenominatorCapExceeded(ValueError):
    pass


class InsufficientDepth(ArithmeticError):
    """A truncated expansion is too short to decide the query."""


@contextlib.contextmanager
def precision(bits):
    with flint.ctx.workprec(int(bits)):
        yield


def escalate(fn, start=None, cap=PREC_CAP):
    """Call ``fn()`` at doubling precision until no UndecidableZero escapes.

    TruncationUndecided is not a precision problem and is re-raised at once.
    """
    bits = start or default_precision()
    while True:
        try:
            with precision(bits):
                return fn()
        except TruncationUndecided:
            raise
        except UndecidableZero:
            if bits >= cap:
                raise
            bits = min(2 * bits, cap)


# rationals

def frac(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    return Fraction(x)


def fmt_rat(q):
    if q == INF:
        return "inf"
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def parse_rat(s):
    return INF if s == "inf" else Fraction(s)


def to_fmpq(q):
    q = Fraction(q)
    return flint.fmpq(q.numerator, q.denominator)


def from_fmpq(q):
    return Fraction(int(q.p), int(q.q))


# number fields

def _sort_key(z):
    return (float(z.real.mid()), float(z.imag.mid()))


class NumberField:
    """Q[x]/(p) for an irreducible p of degree >= 2, with its complex embeddings."""

    _cache = {}

    def __new__(cls, minpoly):
        p = flint.fmpq_poly(minpoly)
        p = p / p.coeffs()[-1]
        key = tuple(str(c) for c in p.coeffs())
        self = cls._cache.get(key)
        if self is None:
            self = super().__new__(cls)
            self.minpoly = p
            self.key = key
            self.degree = p.degree()
            with precision(BASE_PREC):
                roots = [r for r, _ in p.complex_roots()]
            self._base = sorted(roots, key=_sort_key)
            self._by_prec = {BASE_PREC: self._base}
            self._conj = [self._match(self._base, r.conjugate()) for r in self._base]
            cls._cache[key] = self
        return self

    @staticmethod
    def _match(balls, z):
        hits = [j for j, b in enumerate(balls) if b.overlaps(z)]
        if len(hits) != 1:
            raise UndecidableZero("embedding match failed")
        return hits[0]

    def roots(self):
        """Embeddings of theta at the current precision, in a fixed order."""
        prec = max(flint.ctx.prec, BASE_PREC)
        got = self._by_prec.get(prec)
        if got is None:
            with precision(prec):
                fresh = [r for r, _ in self.minpoly.complex_roots()]
            got = [None] * self.degree
            for r in fresh:
                got[self._match(self._base, r)] = r
            self._by_prec[prec] = got
        return got

    def conj_index(self, j):
        return self._conj[j]

    def is_real_embedding(self, j):
        return self._conj[j] == j

    def __eq__(self, other):
        return self is other

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return f"NumberField({self.minpoly})"


def alg(field, poly, emb):
    """Element of ``field`` under embedding ``emb``; demotes constants to Fraction."""
    poly = flint.fmpq_poly(poly) % field.minpoly
    if poly.degree() <= 0:
        return from_fmpq(poly.coeffs()[0]) if poly.degree() == 0 else Fraction(0)
    return AlgNum(field, poly, emb)


def theta(field, emb):
    return AlgNum(field, flint.fmpq_poly([0, 1]), emb)


class AlgNum:
    """An irrational element of a number field with a chosen complex embedding."""

    __slots__ = ("field", "poly", "emb")

    def __init__(self, field, poly, emb):
        self.field = field
        self.poly = poly
        self.emb = emb

    def _lift(self, other):
        if isinstance(other, AlgNum):
            if other.field is self.field and other.emb == self.emb:
                return other.poly
            return None
        if isinstance(other, (int, Fraction)):
            return flint.fmpq_poly([to_fmpq(other)])
        if isinstance(other, Ball):
            return None
        return NotImplemented

    def _binary(self, other, op, swap=False):
        p = self._lift(other)
        if p is NotImplemented:
            return NotImplemented
        if p is None:
            a, b = Ball(self), Ball(other)
            return op(b, a) if swap else op(a, b)
        a, b = (p, self.poly) if swap else (self.poly, p)
        return alg(self.field, op(a, b), self.emb)

    def __add__(self, o):
        return self._binary(o, lambda a, b: a + b)

    __radd__ = __add__

    def __sub__(self, o):
        return self._binary(o, lambda a, b: a - b)

    def __rsub__(self, o):
        return self._binary(o, lambda a, b: a - b, swap=True)

    def __mul__(self, o):
        return self._binary(o, lambda a, b: a * b)

    __rmul__ = __mul__

    def __neg__(self):
        return AlgNum(self.field, -self.poly, self.emb)

    def inverse(self):
        g, s, _ = self.poly.xgcd(self.field.minpoly)
        return alg(self.field, s / g, self.emb)

    def __truediv__(self, o):
        if isinstance(o, (int, Fraction)):
            if o == 0:
                raise ZeroDivisionError
            return alg(self.field, self.poly / to_fmpq(o), self.emb)
        if isinstance(o, AlgNum):
            if o.field is self.field and o.emb == self.emb:
                return self * o.inverse()
            return Ball(self) / Ball(o)
        if isinstance(o, Ball):
            return Ball(self) / o
        return NotImplemented

    def __rtruediv__(self, o):
        if isinstance(o, (int, Fraction)):
            return self.inverse() * o
        return NotImplemented

    def __pow__(self, n):
        r = Fraction(1)
        for _ in range(n):
            r = r * self
        return r

    def to_acb(self):
        z = self.field.roots()[self.emb]
        return flint.acb_poly(self.poly)(z)

    def conjugate(self):
        return AlgNum(self.field, self.poly, self.field.conj_index(self.emb))

    def minpoly(self):
        return algebraic_minpoly(self)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, AlgNum)):
            return alg_eq(self, other)
        return NotImplemented

    def __hash__(self):
        return hash(tuple(str(c) for c in self.minpoly().coeffs()))

    def __repr__(self):
        return f"AlgNum({self.poly} mod {self.field.minpoly}, emb={self.emb})"


def algebraic_minpoly(a):
    """Monic minimal polynomial over Q of an exact algebraic number."""
    if isinstance(a, (int, Fraction)):
        return flint.fmpq_poly([-to_fmpq(a), 1])
    n = a.field.degree
    rows = []
    for k in range(n):
        col = (a.poly * flint.fmpq_poly([0] * k + [1])) % a.field.minpoly
        c = col.coeffs() + [0] * (n - len(col.coeffs()))
        rows.append(c[:n])
    # matrix of multiplication by a in the power basis; rows are images
    mat = flint.fmpq_mat(n, n, [rows[j][i] for i in range(n) for j in range(n)])
    return flint.fmpq_poly(mat.minpoly())


def alg_eq(a, b):
    """Exact equality of two exact algebraic numbers (Fraction or AlgNum)."""
    if not isinstance(a, AlgNum) and not isinstance(b, AlgNum):
        return Fraction(a) == Fraction(b)
    if isinstance(a, AlgNum) and isinstance(b, AlgNum):
        if a.field is b.field and a.emb == b.emb:
            return a.poly == b.poly
    elif isinstance(a, AlgNum) or isinstance(b, AlgNum):
        return False  # an AlgNum is never rational
    pa, pb = algebraic_minpoly(a), algebraic_minpoly(b)
    if pa != pb:
        return False

    def decide():
        roots = [r for r, _ in pa.complex_roots()]
        za, zb = a.to_acb(), b.to_acb()
        ia = [j for j, r in enumerate(roots) if r.overlaps(za)]
        ib = [j for j, r in enumerate(roots) if r.overlaps(zb)]
        if len(ia) != 1 or len(ib) != 1:
            raise UndecidableZero("root identification ambiguous")
        return ia[0] == ib[0]

    return escalate(decide, start=max(flint.ctx.prec, BASE_PREC))


def is_exact(c):
    if isinstance(c, (int, Fraction, AlgNum)):
        return True
    if isinstance(c, TSeries):
        return c.prec is None and all(is_exact(x) for x in c.c)
    return False


def is_zero(c):
    """Exact zero test; raises UndecidableZero when it cannot be decided."""
    if isinstance(c, (int, Fraction)):
        return c == 0
    if isinstance(c, AlgNum):
        return False
    return c.is_zero()


def is_structural_zero(c):
    """True only for values known to be exactly zero; never raises."""
    if isinstance(c, (int, Fraction)):
        return c == 0
    if isinstance(c, AlgNum):
        return False
    if isinstance(c, Ball):
        return c.v.is_zero()
    if isinstance(c, TSeries):
        return not c.c and c.prec is None
    return False


def to_acb(c):
    if isinstance(c, flint.acb):
        return c
    if isinstance(c, Ball):
        return c.v
    if isinstance(c, AlgNum):
        return c.to_acb()
    if isinstance(c, Fraction):
        return flint.acb(to_fmpq(c))
    if isinstance(c, int):
        return flint.acb(c)
    if isinstance(c, (float, complex)):
        return flint.acb(c)
    if isinstance(c, TSeries):
        raise IncompatibleDomains("t-series cannot be converted to a ball")
    raise TypeError(f"cannot convert {type(c).__name__} to a ball")


def to_complex(c):
    z = to_acb(c)
    return complex(float(z.real.mid()), float(z.imag.mid()))


def conj(c):
    if isinstance(c, (int, Fraction)):
        return c
    if isinstance(c, AlgNum):
        return c.conjugate()
    if isinstance(c, Ball):
        return Ball(c.v.conjugate())
    raise TypeError(type(c).__name__)


def is_real(c):
    """Exact realness of an exact algebraic number; balls decided by containment."""
    if isinstance(c, (int, Fraction)):
        return True
    if isinstance(c, AlgNum):
        if c.field.is_real_embedding(c.emb):
            return True
        return alg_eq(c, c.conjugate())
    z = to_acb(c)
    if not z.imag.contains(0):
        return False
    return True


def real_value(c):
    """Float of a real number (midpoint of the real part for non-exact input)."""
    if isinstance(c, (int, Fraction)):
        return float(c)
    return float(to_acb(c).real.mid())


def sort_key(c):
    if isinstance(c, (int, Fraction)):
        return (float(c), 0.0)
    z = to_acb(c)
    return (float(z.real.mid()), float(z.imag.mid()))


# complex balls

class Ball:
    """Complex ball at the current working precision."""

    __slots__ = ("v",)

    def __init__(self, v):
        self.v = v if isinstance(v, flint.acb) else to_acb(v)

    @staticmethod
    def _other(o):
        if isinstance(o, TSeries):
            raise IncompatibleDomains("ball mixed with t-series")
        if isinstance(o, (int, Fraction, AlgNum, Ball, flint.acb, float, complex)):
            return to_acb(o)
        return None

    def __add__(self, o):
        w = self._other(o)
        return NotImplemented if w is None else Ball(self.v + w)

    __radd__ = __add__

    def __sub__(self, o):
        w = self._other(o)
        return NotImplemented if w is None else Ball(self.v - w)

    def __rsub__(self, o):
        w = self._other(o)
        return NotImplemented if w is None else Ball(w - self.v)

    def __mul__(self, o):
        w = self._other(o)
        return NotImplemented if w is None else Ball(self.v * w)

    __rmul__ = __mul__

    def __truediv__(self, o):
        w = self._other(o)
        if w is None:
            return NotImplemented
        if w.contains(0):
            raise UndecidableZero("division by a ball containing zero")
        return Ball(self.v / w)

    def __rtruediv__(self, o):
        w = self._other(o)
        if w is None:
            return NotImplemented
        if self.v.contains(0):
            raise UndecidableZero("division by a ball containing zero")
        return Ball(w / self.v)

    def __neg__(self):
        return Ball(-self.v)

    def __pow__(self, n):
        return Ball(self.v ** n)

    def is_zero(self):
        if self.v.is_zero():
            return True
        if self.v.contains(0):
            raise UndecidableZero(f"ball {self.v} straddles zero")
        return False

    def contains(self, x):
        return self.v.contains(to_acb(x))

    def overlaps(self, o):
        return self.v.overlaps(to_acb(o))

    def radius(self):
        r = self.v.rad()
        return float(r.mid()) if hasattr(r, "mid") else float(r)

    def conjugate(self):
        return Ball(self.v.conjugate())

    def __repr__(self):
        return f"Ball({self.v})"


def ball_fields(c, digits=20):
    """(re, im, radius) decimal strings of a coefficient."""
    if isinstance(c, Fraction):
        return fmt_rat(c), "0", "0"
    with precision(max(flint.ctx.prec, default_precision())):
        z = to_acb(c)
    re = z.real.mid().str(digits, radius=False)
    im = z.imag.mid().str(digits, radius=False)
    rad = max(float(z.real.rad()), float(z.imag.rad()))
    return re, im, f"{rad:.3e}"


# truncated power series in t

def _all_rational(c):
    return all(type(x) is Fraction or type(x) is int for x in c)


def _rational_mul(a, b, lim):
    """Product of two rational coefficient lists, truncated to lim terms."""
    if not a or not b:
        return []
    pa = flint.fmpq_poly([flint.fmpq(x.numerator, x.denominator) for x in a[:lim]])
    pb = flint.fmpq_poly([flint.fmpq(x.numerator, x.denominator) for x in b[:lim]])
    return [Fraction(int(c.p), int(c.q)) for c in (pa * pb).coeffs()[:lim]]



class TSeries:
    """Element of K[t]/(t^K) with exact coefficients.

    ``prec`` is None when the value is known exactly (a polynomial of degree
    < K); otherwise terms of degree >= prec are unknown.
    """

    __slots__ = ("c", "K", "prec")

    def __init__(self, coeffs, K, prec=None):
        c = list(coeffs)
        if prec is not None:
            c = c[:prec]
        elif len(c) > K:
            if any(not is_structural_zero(x) for x in c[K:]):
                prec = K
            c = c[:K]
        while c and is_structural_zero(c[-1]):
            c.pop()
        self.c = tuple(c)
        self.K = K
        self.prec = prec

    @classmethod
    def const(cls, x, K):
        return cls([x], K)

    @classmethod
    def t(cls, K):
        return cls([0, 1], K)

    def _coerce(self, o):
        if isinstance(o, TSeries):
            return o
        if isinstance(o, (int, Fraction, AlgNum)):
            return TSeries([o], self.K)
        if isinstance(o, Ball):
            raise IncompatibleDomains("t-series mixed with a ball")
        return None

    @staticmethod
    def _minprec(a, b):
        ps = [p for p in (a, b) if p is not None]
        return min(ps) if ps else None

    def __add__(self, o):
        o = self._coerce(o)
        if o is None:
            return NotImplemented
        n = max(len(self.c), len(o.c))
        c = [(self.c[i] if i < len(self.c) else 0) + (o.c[i] if i < len(o.c) else 0) for i in range(n)]
        return TSeries(c, min(self.K, o.K), self._minprec(self.prec, o.prec))

    __radd__ = __add__

    def __neg__(self):
        return TSeries([-x for x in self.c], self.K, self.prec)

    def __sub__(self, o):
        o = self._coerce(o)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, o):
        o = self._coerce(o)
        if o is None:
            return NotImplemented
        return o + (-self)

    def valuation(self):
        for i, x in enumerate(self.c):
            if not is_structural_zero(x):
                return i
        return INF if self.prec is None else self.prec

    def __mul__(self, o):
        o = self._coerce(o)
        if o is None:
            return NotImplemented
        K = min(self.K, o.K)
        if is_structural_zero(self) or is_structural_zero(o):
            return TSeries([], K)
        va, vb = self.valuation(), o.valuation()
        precs = []
        if self.prec is not None:
            precs.append(self.prec + (vb if vb != INF else self.prec))
        if o.prec is not None:
            precs.append(o.prec + (va if va != INF else o.prec))
        prec = min(precs) if precs else None
        if prec is not None and prec == INF:
            prec = None
        # exact products keep their high terms so the constructor can mark truncation
        lim = len(self.c) + len(o.c) if prec is None else min(prec, K)
        if _all_rational(self.c) and _all_rational(o.c):
            full = _rational_mul(self.c, o.c, lim)
        else:
            full = [0] * max(min(len(self.c) + len(o.c) - 1, lim), 0)
            for i, a in enumerate(self.c[:lim]):
                if is_structural_zero(a):
                    continue
                for j, b in enumerate(o.c[:lim - i]):
                    full[i + j] = full[i + j] + a * b
        if prec is not None:
            prec = min(prec, K)
            return TSeries(full, K, prec)
        return TSeries(full, K)

    __rmul__ = __mul__

    def __pow__(self, n):
        r = TSeries([1], self.K)
        for _ in range(n):
            r = r * self
        return r

    def inverse(self):
        if not self.c or is_structural_zero(self.c[0]):
            raise ZeroDivisionError("t-series with zero constant term is not invertible")
        if len(self.c) == 1 and self.prec is None:
            return TSeries([1 / self.c[0]], self.K)
        a0inv = 1 / self.c[0]
        n = self.K if self.prec is None else min(self.K, self.prec)
        inv = [a0inv]
        for k in range(1, n):
            s = 0
            for j in range(1, min(k, len(self.c) - 1) + 1):
                s = s + self.c[j] * inv[k - j]
            inv.append(-s * a0inv)
        return TSeries(inv, self.K, n)

    def __truediv__(self, o):
        if isinstance(o, (int, Fraction, AlgNum)):
            return TSeries([x / o for x in self.c], self.K, self.prec)
        o = self._coerce(o)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, o):
        o = self._coerce(o)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def is_zero(self):
        if self.c:
            return False
        if self.prec is None:
            return True
        raise TruncationUndecided(f"t-series vanishes modulo t^{self.prec}")

    def const_term(self):
        return self.c[0] if self.c else Fraction(0)

    def coeff(self, k):
        return self.c[k] if k < len(self.c) else Fraction(0)

    def at(self, t0, strict=True):
        """Value at t = t0 (exact); a truncated series raises unless strict=False."""
        if self.prec is not None and strict:
            raise TruncationUndecided("cannot evaluate a truncated t-series exactly")
        r = Fraction(0)
        for x in reversed(self.c):
            r = r * t0 + x
        return r

    def derivative(self):
        return TSeries([k * x for k, x in enumerate(self.c)][1:], self.K,
                       None if self.prec is None else max(self.prec - 1, 0))

    def is_constant(self):
        return self.prec is None and len(self.c) <= 1

    def __eq__(self, o):
        if isinstance(o, TSeries):
            return self.c == o.c and self.prec == o.prec
        if isinstance(o, (int, Fraction)):
            return self.prec is None and self.c == ((Fraction(o),) if o else ())
        return NotImplemented

    def __hash__(self):
        return hash((self.c, self.prec))

    def __repr__(self):
        return f"TSeries({self.render()})"

    def render(self):
        parts = []
        for k, x in enumerate(self.c):
            if is_structural_zero(x):
                continue
            s = fmt_rat(x) if isinstance(x, Fraction) else repr(x)
            parts.append(s if k == 0 else f"{s}*t" + (f"^{k}" if k > 1 else ""))
        body = " + ".join(parts) if parts else "0"
        return body + (f" + O(t^{self.prec})" if self.prec is not None else "")

    def to_json(self):
        return {"coeffs": [fmt_rat(x) if isinstance(x, Fraction) else repr(x) for x in self.c],
                "prec": self.prec}

"""Expression front-end for polynomials in x, y and t.

Grammar::

    expr     := ['+'|'-'] term (('+'|'-') term)*
    term     := factor ('*' factor)*
    factor   := base ('^' uint)?
    base     := 'x' | 'y' | 't' | rational | '(' expr ')'
    rational := int ('/' uint)?

Whitespace is ignored and implicit multiplication is rejected.
"""

from __future__ import annotations

from fractions import Fraction

from .numbers import fmt_rat
from .poly import BivarPoly, FamilyPoly


class ParseError(ValueError):
    def __init__(self, msg, pos):
        super().__init__(f"{msg} at position {pos}")
        self.pos = pos


VARS = {"x": (1, 0, 0), "y": (0, 1, 0), "t": (0, 0, 1)}


def _add(a, b, sign=1):
    out = dict(a)
    for k, c in b.items():
        v = out.get(k, 0) + sign * c
        if v:
            out[k] = v
        else:
            out.pop(k, None)
    return out


def _mul(a, b):
    out = {}
    for k1, c1 in a.items():
        for k2, c2 in b.items():
            k = (k1[0] + k2[0], k1[1] + k2[1], k1[2] + k2[2])
            v = out.get(k, 0) + c1 * c2
            if v:
                out[k] = v
            else:
                out.pop(k, None)
    return out


class _Parser:
    def __init__(self, text, frac_exponents=False):
        self.text = text
        self.frac = frac_exponents
        self.toks = []
        i = 0
        while i < len(text):
            ch = text[i]
            if ch.isspace():
                i += 1
            elif ch.isdigit():
                j = i
                while j < len(text) and text[j].isdigit():
                    j += 1
                self.toks.append(("num", int(text[i:j]), i))
                i = j
            elif ch in "+-*/^()":
                self.toks.append((ch, ch, i))
                i += 1
            elif ch.isalpha():
                j = i
                while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                    j += 1
                word = text[i:j]
                if word not in VARS:
                    raise ParseError(f"unknown variable {word!r}", i)
                self.toks.append(("var", word, i))
                i = j
            else:
                raise ParseError(f"unexpected character {ch!r}", i)
        self.k = 0

    def peek(self):
        return self.toks[self.k] if self.k < len(self.toks) else ("end", None, len(self.text))

    def take(self, kind):
        tok = self.peek()
        if tok[0] != kind:
            want = "number" if kind == "num" else repr(kind)
            got = "end of input" if tok[0] == "end" else repr(tok[1])
            raise ParseError(f"expected {want}, found {got}", tok[2])
        self.k += 1
        return tok

    def expr(self):
        sign = 1
        if self.peek()[0] in "+-":
            sign = -1 if self.take(self.peek()[0])[0] == "-" else 1
        acc = _add({}, self.term(), sign)
        while self.peek()[0] in ("+", "-"):
            op = self.take(self.peek()[0])[0]
            acc = _add(acc, self.term(), 1 if op == "+" else -1)
        return acc

    def term(self):
        acc = self.factor()
        while self.peek()[0] == "*":
            self.take("*")
            acc = _mul(acc, self.factor())
        return acc

    def factor(self):
        base = self.base()
        if self.peek()[0] == "^":
            self.take("^")
            tok = self.peek()
            if tok[0] == "-":
                raise ParseError("negative exponents are not allowed", tok[2])
            if tok[0] == "(" and self.frac:
                return self._frac_power(base)
            n = self.take("num")[1]
            out = {(0, 0, 0): Fraction(1)}
            for _ in range(n):
                out = _mul(out, base)
            return out
        return base

    def _frac_power(self, base):
        self.take("(")
        num = self.take("num")
        e = Fraction(num[1])
        if self.peek()[0] == "/":
            self.take("/")
            den = self.take("num")
            if den[1] == 0:
                raise ParseError("zero denominator", den[2])
            e = e / den[1]
        self.take(")")
        if len(base) != 1 or list(base.values())[0] != 1 or sum(next(iter(base))) != 1:
            raise ParseError("fractional exponents apply to a single variable", num[2])
        (k, _), = base.items()
        return {tuple(e * v for v in k): Fraction(1)}

    def base(self):
        tok = self.peek()
        if tok[0] == "var":
            self.take("var")
            return {VARS[tok[1]]: Fraction(1)}
        if tok[0] == "num":
            self.take("num")
            val = Fraction(tok[1])
            if self.peek()[0] == "/":
                self.take("/")
                den = self.take("num")
                if den[1] == 0:
                    raise ParseError("zero denominator", den[2])
                val = val / den[1]
            return {(0, 0, 0): val} if val else {}
        if tok[0] == "(":
            self.take("(")
            inner = self.expr()
            self.take(")")
            return inner
        got = "end of input" if tok[0] == "end" else repr(tok[1])
        raise ParseError(f"unexpected {got}", tok[2])


def parse_monomials(text):
    """Parse to a map (i, j, k) -> coefficient of x^i y^j t^k."""
    p = _Parser(text)
    if not p.toks:
        raise ParseError("empty expression", 0)
    out = p.expr()
    tok = p.peek()
    if tok[0] != "end":
        raise ParseError(f"unexpected {tok[1]!r}", tok[2])
    return out


def parse_arc(text):
    """An arc x = lambda(y) written in y, allowing exponents y^(p/q)."""
    from .series import PuiseuxSeries
    p = _Parser(text, frac_exponents=True)
    if not p.toks:
        raise ParseError("empty expression", 0)
    mons = p.expr()
    tok = p.peek()
    if tok[0] != "end":
        raise ParseError(f"unexpected {tok[1]!r}", tok[2])
    for (i, j, k) in mons:
        if i or k:
            raise ParseError("an arc may only involve y", 0)
        if j <= 0:
            raise ParseError("arc exponents must be positive", 0)
    return PuiseuxSeries([(j, c) for (_, j, _), c in mons.items()])


def parse_expression(text, K=8):
    """BivarPoly when t does not occur, FamilyPoly otherwise."""
    mons = parse_monomials(text)
    if any(k for (_, _, k) in mons):
        tpoly = {}
        for (i, j, k), c in mons.items():
            cs = tpoly.setdefault((i, j), [])
            cs.extend([0] * (k + 1 - len(cs)))
            cs[k] = c
        return FamilyPoly(tpoly, K)
    return BivarPoly({(i, j): c for (i, j, _), c in mons.items()})


def _key(k):
    # canonical order: descending x-degree, then ascending y, then ascending t
    return (-k[0], k[1], k[2])


def render_monomials(mons):
    parts = []
    for k in sorted(mons, key=_key):
        c = mons[k]
        if not c:
            continue
        factors = []
        for name, e in zip("xyt", k):
            if e == 1:
                factors.append(name)
            elif e:
                es = fmt_rat(e)
                factors.append(f"{name}^{es}" if "/" not in es else f"{name}^({es})")
        mag = abs(c)
        if mag != 1 or not factors:
            factors.insert(0, fmt_rat(mag))
        body = "*".join(factors)
        if not parts:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append(("- " if c < 0 else "+ ") + body)
    return " ".join(parts) if parts else "0"


def render(p):
    """Canonical text form; parse_expression(render(p)) == p."""
    if isinstance(p, FamilyPoly):
        mons = {}
        for (i, q), cs in p.tpoly.items():
            for k, c in enumerate(cs):
                if c:
                    mons[(i, q, k)] = c
        return render_monomials(mons)
    return render_monomials({(i, q, 0): c for (i, q), c in p.terms.items()})

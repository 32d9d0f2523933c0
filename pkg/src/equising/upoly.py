"""Univariate polynomials as coefficient lists, constant term first.

Coefficients are exact (Fraction or AlgNum in a single field and embedding)
unless stated otherwise.  Factorization and root isolation over Q go through
python-flint.
"""

from __future__ import annotations

from fractions import Fraction

import flint

from . import numbers as nb


def trim(p):
    p = list(p)
    while p and nb.is_structural_zero(p[-1]):
        p.pop()
    return p


def degree(p):
    return len(trim(p)) - 1


def add(a, b):
    n = max(len(a), len(b))
    return trim([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)])


def sub(a, b):
    return add(a, [-c for c in b])


def mul(a, b):
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return trim(out)


def scale(p, c):
    return trim([c * x for x in p])


def deriv(p):
    return trim([k * c for k, c in enumerate(p)][1:])


def evaluate(p, x):
    r = Fraction(0)
    for c in reversed(p):
        r = r * x + c
    return r


def monic(p):
    p = trim(p)
    lead = p[-1]
    if isinstance(lead, Fraction) and lead == 1:
        return p
    inv = 1 / lead
    return [c * inv for c in p[:-1]] + [Fraction(1)]


def divmod_(a, b):
    a, b = trim(a), trim(b)
    if not b:
        raise ZeroDivisionError
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    inv = 1 / b[-1]
    r = list(a)
    while len(r) >= len(b) and r:
        k = len(r) - len(b)
        c = r[-1] * inv
        q[k] = c
        for j, bc in enumerate(b):
            r[k + j] = r[k + j] - c * bc
        r.pop()
        r = trim(r)
    return trim(q), r


def gcd(a, b):
    a, b = trim(a), trim(b)
    while b:
        a, b = b, divmod_(a, b)[1]
    return monic(a) if a else []


def squarefree_decomposition(p):
    """Yun's algorithm: [(s_k, k)] with p = lead * prod s_k^k, s_k squarefree and coprime."""
    p = monic(p)
    out = []
    if len(p) <= 1:
        return out
    dp = deriv(p)
    a = gcd(p, dp)
    b = divmod_(p, a)[0]
    c = divmod_(dp, a)[0]
    d = sub(c, deriv(b))
    k = 1
    while len(b) > 1:
        a = gcd(b, d)
        if len(a) > 1:
            out.append((a, k))
        b = divmod_(b, a)[0]
        c = divmod_(d, a)[0]
        d = sub(c, deriv(b))
        k += 1
    return out


def gcd_free_basis(polys):
    """Coprime squarefree pieces with their multiplicity in each input.

    Returns [(piece, [e_0, e_1, ...])] such that polys[k] equals a constant
    times prod piece^{e_k} over the pieces.
    """
    pieces = []
    for k, p in enumerate(polys):
        if degree(p) < 1:
            continue
        for s, e in squarefree_decomposition(p):
            rest = s
            nxt = []
            for piece, exps in pieces:
                g = gcd(piece, rest) if len(rest) > 1 else [Fraction(1)]
                if len(g) > 1:
                    gexps = list(exps)
                    gexps[k] += e
                    nxt.append((g, gexps))
                    other = divmod_(piece, g)[0]
                    if len(other) > 1:
                        nxt.append((monic(other), exps))
                    rest = divmod_(rest, g)[0]
                else:
                    nxt.append((piece, exps))
            if len(rest) > 1:
                exps = [0] * len(polys)
                exps[k] = e
                nxt.append((monic(rest), exps))
            pieces = nxt
    return pieces


# rational polynomials

def is_rational(p):
    return all(isinstance(c, (int, Fraction)) for c in p)


def to_fmpq_poly(p):
    return flint.fmpq_poly([nb.to_fmpq(c) for c in p])


def from_fmpq_poly(p):
    return [nb.from_fmpq(c) for c in p.coeffs()]


def factor_q(p):
    """Monic irreducible factors over Q with multiplicities."""
    _, facs = to_fmpq_poly(p).factor()
    out = []
    for f, e in facs:
        out.append((monic(from_fmpq_poly(f)), int(e)))
    out.sort(key=lambda fe: (len(fe[0]), [float(c) for c in fe[0]]))
    return out


def exact_roots_q(p):
    """All complex roots of a rational polynomial as exact numbers, with multiplicity.

    Rational roots are Fractions; each irreducible factor of degree >= 2
    contributes one AlgNum per complex embedding of its number field.
    """
    out = []
    for f, e in factor_q(p):
        if len(f) == 2:
            out.append((-f[0] / f[1], e))
        else:
            field = nb.NumberField(to_fmpq_poly(f))
            for j in range(field.degree):
                out.append((nb.theta(field, j), e))
    return out


def rational_roots_over_field(p):
    """Rational roots of a polynomial whose coefficients lie in one number field."""
    coords = []
    for c in p:
        if isinstance(c, nb.AlgNum):
            cs = [nb.from_fmpq(x) for x in c.poly.coeffs()]
        else:
            cs = [Fraction(c)]
        coords.append(cs)
    width = max(len(cs) for cs in coords)
    g = None
    for j in range(width):
        comp = trim([cs[j] if j < len(cs) else Fraction(0) for cs in coords])
        if not comp:
            continue
        g = comp if g is None else gcd(g, comp)
    if g is None or len(g) <= 1:
        return []
    return [(r, e) for r, e in exact_roots_q(g) if isinstance(r, Fraction)]


def ball_roots(p):
    """Isolated complex roots of a squarefree polynomial with any coefficients.

    Raises UndecidableZero when isolation fails at the current precision.
    """
    coeffs = [nb.to_acb(c) for c in p]
    poly = flint.acb_poly(coeffs)
    try:
        roots = poly.roots()
    except ValueError as exc:
        raise nb.UndecidableZero(str(exc)) from exc
    return sorted(roots, key=lambda z: (float(z.real.mid()), float(z.imag.mid())))


def real_roots_q(p):
    return [(r, e) for r, e in exact_roots_q(p) if nb.is_real(r)]


def to_json(p):
    return [nb.fmt_rat(c) if isinstance(c, Fraction) else nb.ball_fields(c)[0] for c in p]

"""Newton-Puiseux roots.

Roots of one or several polynomials are expanded together in a single tree.
Each node carries an exact prefix; its children come from the roots of the
edge polynomials of the relative polygons at slopes above the node's last
exponent.  Every coefficient is kept exact: rationals stay in Q, irrational
edge roots open a number field, and when a cluster inside a number field
splits through an irreducible factor of higher degree, the field is replaced
by a primitive element of the extension (norm, factor, gcd).  Once a branch is
simple it is extended by plain Newton steps until the requested depth.

Contact orders between roots are read off the tree, so they are exact even
where the series themselves are truncated.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

import flint

from . import numbers as nb
from . import upoly
from .numbers import INF
from .poly import BivarPoly, substitute_arc
from .polygon import edge_polynomial, polygon_of_dots
from .series import PuiseuxSeries

MAX_TERMS = 64
SHEAR_CAP = 64


class NotMiniRegular(ValueError):
    def __init__(self, m):
        super().__init__(f"not mini-regular: multiplicity {m} but no x^{m} term")
        self.m = m


def mini_regular_order(f):
    m = f.multiplicity()
    if m == INF:
        raise ValueError("zero polynomial")
    if m.denominator != 1:
        raise NotMiniRegular(m)
    m = int(m)
    if nb.is_zero(f.coeff(m, 0)):
        raise NotMiniRegular(m)
    return m


def shear(f, c):
    """f(x + c*y, y)."""
    if c == 0:
        return f
    return substitute_arc(f, PuiseuxSeries([(1, Fraction(c))]))


def shear_candidates(seed=0):
    pool = sorted({Fraction(p, q) for q in range(1, 6) for p in range(-6, 7) if p},
                  key=lambda r: (abs(r.numerator) + r.denominator, r))
    rng = random.Random(seed)
    groups = {}
    for r in pool:
        groups.setdefault(abs(r.numerator) + r.denominator, []).append(r)
    out = [Fraction(0)]
    for h in sorted(groups):
        g = groups[h]
        rng.shuffle(g)
        out.extend(g)
    return out[:SHEAR_CAP]


def shear_normalize(f, seed=0):
    """(f(x + c y, y), c) with the first candidate c that makes f mini-regular."""
    for c in shear_candidates(seed):
        g = shear(f, c)
        try:
            mini_regular_order(g)
            return g, c
        except NotMiniRegular:
            continue
    raise NotMiniRegular(f.multiplicity())


# squarefree splitting over Q[x, y]

def _to_sympy(f):
    import sympy
    x, y = sympy.symbols("x y")
    expr = 0
    for (i, q), c in f.terms.items():
        if q.denominator != 1:
            raise ValueError("integer y-exponents required")
        expr += sympy.Rational(c.numerator, c.denominator) * x ** i * y ** int(q)
    return sympy.Poly(expr, x, y, domain="QQ"), x, y


def _from_sympy(P):
    out = {}
    for (i, j), c in P.terms():
        out[(i, j)] = Fraction(int(c.p), int(c.q))
    return BivarPoly(out)


def squarefree_split(f):
    """Squarefree factors g_i of f with exponents, plus the cofactor h of f_x.

    f = const * prod g_i^{e_i} and f_x = prod g_i^{e_i - 1} * h.
    """
    P, x, y = _to_sympy(f)
    _, facs = P.sqf_list()
    parts = [(_from_sympy(g), int(e)) for g, e in facs if g.degree(x) > 0]
    Px = P.diff(x)
    for g, e in facs:
        if e > 1:
            q, r = Px.div(g ** (e - 1))
            assert r.is_zero
            Px = q
    return parts, _from_sympy(Px)


# roots of edge polynomials, exactly

def _lagrange(points):
    u = flint.fmpq_poly([0, 1])
    total = flint.fmpq_poly([0])
    for k, (xk, yk) in enumerate(points):
        term = flint.fmpq_poly([yk])
        for j, (xj, _) in enumerate(points):
            if j != k:
                term = term * (u - xj) / (xk - xj)
        total = total + term
    return total


def _coeff_poly(c):
    if isinstance(c, nb.AlgNum):
        return c.poly
    return flint.fmpq_poly([nb.to_fmpq(c)])


def _norm(p, minpoly, s):
    """Res_x(m(x), P(u - s x, x)) with P the lift of p to Q[x][u]."""
    cs = [_coeff_poly(c) for c in p]
    n = minpoly.degree() * (len(p) - 1)
    pts = []
    for k in range(n + 1):
        lin = flint.fmpq_poly([k, -s])
        acc = flint.fmpq_poly([0])
        pw = flint.fmpq_poly([1])
        for c in cs:
            acc = acc + c * pw
            pw = pw * lin
        pts.append((k, minpoly.resultant(acc)))
    return _lagrange(pts)


def _shift_poly(p, a):
    """p(u + a) as a coefficient list."""
    out = []
    for c in reversed(p):
        out = upoly.add(upoly.mul(out, [a, Fraction(1)]), [c])
    return out


def _embed_map(theta_new):
    """Map elements of the old field to the new one, sending theta to theta_new."""
    def conv(c):
        if isinstance(c, nb.AlgNum):
            r = Fraction(0)
            for a in reversed(c.poly.coeffs()):
                r = r * theta_new + nb.from_fmpq(a)
            return r
        return c
    return conv


def _field_of(p):
    for c in p:
        if isinstance(c, nb.AlgNum):
            return c.field, c.emb
    return None, None


def field_roots(p, F=None, emb=None):
    """Complex roots of a squarefree polynomial over Q or Q(theta), exactly.

    Returns [(value, conv, (field, emb))] where conv is None when the value
    lies in the coefficient field (or the field is Q), otherwise a map
    embedding the old field in the field of the value.
    """
    p = upoly.monic(p)
    if len(p) == 2:
        return [(-p[0], None, (F, emb))]
    if F is None:
        out = []
        for g, _ in upoly.factor_q(p):
            if len(g) == 2:
                out.append((-g[0], None, (None, None)))
            else:
                K = nb.NumberField(upoly.to_fmpq_poly(g))
                out.extend((nb.theta(K, j), None, (K, j)) for j in range(K.degree))
        return out
    m = F.minpoly
    th = nb.theta(F, emb)
    for s in [0, 1, -1, 2, -2, 3, -3, 4, -4, 5]:
        N = _norm(p, m, s)
        if N.gcd(N.derivative()).degree() == 0:
            break
    else:
        raise ArithmeticError("no squarefree norm found")
    ps = _shift_poly(p, -s * th) if s else p
    out = []
    for g, _ in N.factor()[1]:
        gl = [nb.from_fmpq(c) for c in g.coeffs()]
        d = upoly.gcd(ps, gl)
        if len(d) <= 1:
            continue
        if len(d) == 2:
            out.append((-d[0] - s * th, None, (F, emb)))
            continue
        K = nb.NumberField(g)
        # theta in terms of rho: the linear gcd of m(x) and p_s(rho, x)
        rho0 = nb.theta(K, 0)
        cs = [_coeff_poly(c) for c in p]
        px = []
        lin = [rho0, Fraction(-s)]
        pw = [Fraction(1)]
        for c in cs:
            cl = [nb.from_fmpq(a) for a in c.coeffs()] or [Fraction(0)]
            px = upoly.add(px, upoly.mul(cl, pw))
            pw = upoly.mul(pw, lin)
        lin_fac = upoly.gcd([nb.from_fmpq(a) for a in m.coeffs()], px)
        if len(lin_fac) != 2:
            raise ArithmeticError("primitive element recovery failed")
        tpoly = (-lin_fac[0]).poly if isinstance(lin_fac[0], nb.AlgNum) else flint.fmpq_poly([nb.to_fmpq(-lin_fac[0])])
        base = F.roots()
        found = 0
        for j in range(K.degree):
            tnew = nb.alg(K, tpoly, j)
            z = nb.to_acb(tnew)
            hits = [i for i, r in enumerate(base) if r.overlaps(z)]
            if len(hits) != 1:
                raise nb.UndecidableZero("cannot identify embedding of the old generator")
            if hits[0] != emb:
                continue
            rho = nb.theta(K, j)
            out.append((rho - s * tnew, _embed_map(tnew), (K, j)))
            found += 1
        if found != len(d) - 1:
            raise ArithmeticError("embedding count mismatch in field extension")
    return out


# the joint tree

@dataclass
class Node:
    prefix: PuiseuxSeries
    h: object  # exponent of the last term (0 at the root, INF for a self leaf)
    value: object
    mults: tuple
    fld: tuple = (None, None)
    children: list = field(default_factory=list)
    leaf: object = None  # Leaf when this node is terminal


@dataclass
class Leaf:
    series: PuiseuxSeries
    mults: tuple
    path: tuple
    exact: bool
    index: int = -1


def _conv_poly(G, conv):
    return G if conv is None or G is None else G.map(conv)


class JointRoots:
    """Newton-Puiseux roots of several polynomials expanded in one tree."""

    def __init__(self, polys, target_depth=None, max_terms=MAX_TERMS):
        self.polys = list(polys)
        self.max_terms = max_terms
        self.leaves = []
        self._pending = []
        mults = []
        for g in self.polys:
            dots = g.dots()
            zero_q = [i for i, q in dots if q == 0]
            mults.append(min(zero_q) if zero_q else 0)
            if not zero_q:
                raise NotMiniRegular(g.multiplicity())
        self.root = Node(PuiseuxSeries(), Fraction(0), None, tuple(mults))
        Gs = [g if m > 0 else None for g, m in zip(self.polys, mults)]
        self._grow(self.root, Gs, Fraction(0), (), 0)
        self._index_leaves()
        if target_depth is None:
            finite = [c for row in self.contact for c in row if c != INF]
            target_depth = 1 + max(finite, default=Fraction(0))
            target_depth = max(target_depth, Fraction(1))
        self.depth = Fraction(target_depth)
        for leaf, G, e_last in self._pending:
            self._extend(leaf, G, e_last)
        self._pending = []
        self.conj = self._conjugates()

    # phase 1: split clusters
    def _grow(self, node, Gs, e_last, path, nterms):
        polys = {}
        z = [0] * len(Gs)
        for k, G in enumerate(Gs):
            if G is None:
                continue
            P = polygon_of_dots(G.dots())
            z[k] = P.last[0]
            total = z[k]
            for e in P.edges:
                if e.tan > e_last:
                    total += e.dots[0][0] - e.dots[-1][0]
                    polys.setdefault(e.tan, {})[k] = edge_polynomial(G, e)
            assert total == node.mults[k], (total, node.mults[k])
        if nterms >= self.max_terms and polys:
            node.leaf = Leaf(node.prefix.truncate(min(polys)), node.mults, path, False)
            self.leaves.append(node.leaf)
            return
        if any(z):
            leaf = Node(node.prefix, INF, None, tuple(z))
            leaf.leaf = Leaf(node.prefix, tuple(z), path + (len(node.children),), True)
            node.children.append(leaf)
            self.leaves.append(leaf.leaf)
        for h in sorted(polys):
            Es = [polys[h].get(k, []) for k in range(len(Gs))]
            kids = []
            basis = self._basis(Es)
            for piece, mv in basis:
                for value, conv, fld in field_roots(piece, *node.fld):
                    kids.append((value, conv, tuple(mv), fld))
            kids.sort(key=lambda v: nb.sort_key(v[0]))
            for value, conv, mv, fld in kids:
                prefix = node.prefix.map(conv) if conv else node.prefix
                prefix = prefix + PuiseuxSeries([(h, value)])
                child = Node(prefix, h, value, mv, fld)
                cpath = path + (len(node.children),)
                node.children.append(child)
                lift = PuiseuxSeries([(h, value)])
                sub = [None if mv[k] == 0 else substitute_arc(_conv_poly(Gs[k], conv), lift)
                       for k in range(len(Gs))]
                if sum(mv) == 1:
                    k = mv.index(1)
                    child.leaf = Leaf(prefix, mv, cpath, False)
                    self.leaves.append(child.leaf)
                    self._pending.append((child.leaf, sub[k], h))
                else:
                    self._grow(child, sub, h, cpath, nterms + 1)

    @staticmethod
    def _basis(Es):
        live = [(k, E) for k, E in enumerate(Es) if len(E) > 1]
        if all(upoly.is_rational(E) for _, E in live):
            table = {}
            for k, E in live:
                for g, e in upoly.factor_q(E):
                    key = tuple(g)
                    table.setdefault(key, [0] * len(Es))[k] += e
            return [(list(g), mv) for g, mv in table.items()]
        return upoly.gcd_free_basis(Es)

    # phase 2: Newton steps on simple branches
    def _extend(self, leaf, G, e_last):
        prefix = leaf.series
        target = self.depth
        if not any(i == 0 for (i, _) in G.terms) and G.trunc == INF:
            leaf.exact = True
            return
        while True:
            col1 = [q for (i, q) in G.terms if i == 1]
            q1 = min(col1)
            G = G.truncate_y(q1 + target)
            col0 = sorted(q for (i, q) in G.terms if i == 0)
            if not col0:
                if G.trunc == INF:
                    leaf.series = prefix
                    leaf.exact = True
                else:
                    leaf.series = PuiseuxSeries(prefix.terms, G.trunc - q1)
                return
            q0 = col0[0]
            step = q0 - q1
            assert step > e_last
            if step >= target:
                leaf.series = PuiseuxSeries(prefix.terms, step)
                return
            c = -G.coeff(0, q0) / G.coeff(1, q1)
            prefix = prefix + PuiseuxSeries([(step, c)])
            G = substitute_arc(G, PuiseuxSeries([(step, c)]))
            e_last = step

    def _index_leaves(self):
        self.leaves.sort(key=lambda lf: lf.path)
        for j, lf in enumerate(self.leaves):
            lf.index = j
        n = len(self.leaves)
        hs = {}

        def walk(node, path):
            for idx, ch in enumerate(node.children):
                hs[path + (idx,)] = ch.h
                walk(ch, path + (idx,))
        walk(self.root, ())
        self._h = hs
        C = [[INF] * n for _ in range(n)]
        for a in range(n):
            for b in range(a + 1, n):
                pa, pb = self.leaves[a].path, self.leaves[b].path
                k = 0
                while pa[k] == pb[k]:
                    k += 1
                c = min(hs[pa[:k + 1]], hs[pb[:k + 1]])
                C[a][b] = C[b][a] = c
        self.contact = C

    def _node(self, path):
        node = self.root
        for idx in path:
            node = node.children[idx]
        return node

    def _conjugates(self):
        by_path = {lf.path: lf.index for lf in self.leaves}

        def conj_path(path):
            out = []
            node = self.root
            mirror = self.root
            for idx in path:
                ch = node.children[idx]
                if ch.h == INF:
                    hits = [j for j, c in enumerate(mirror.children) if c.h == INF]
                else:
                    target = nb.conj(ch.value)
                    hits = [j for j, c in enumerate(mirror.children)
                            if c.h == ch.h and _same(c.value, target)]
                if len(hits) != 1:
                    raise nb.UndecidableZero("conjugate branch not identified")
                out.append(hits[0])
                node, mirror = ch, mirror.children[hits[0]]
            return tuple(out)

        return [by_path[conj_path(lf.path)] for lf in self.leaves]

    # queries
    def is_real(self, j):
        return self.conj[j] == j

    def real_below(self, j, h):
        """The truncation of root j below y^h has real coefficients."""
        return self.conj[j] == j or self.contact[j][self.conj[j]] >= h

    def bundle(self, weights, source=None):
        """RootBundle for the polynomial prod polys[k]^weights[k]."""
        roots = []
        idx = []
        for lf in self.leaves:
            m = sum(w * a for w, a in zip(weights, lf.mults))
            if m > 0:
                roots.append((lf.series, m))
                idx.append(lf.index)
        sep = all(self.contact[a][b] < self.depth for a in idx for b in idx if a != b)
        return RootBundle(tuple(roots), source, self.depth, sep, tuple(idx), self)


def _same(a, b):
    if nb.is_exact(a) and nb.is_exact(b):
        return nb.alg_eq(a, b)
    return nb.Ball(a).overlaps(b)


@dataclass(frozen=True)
class RootBundle:
    roots: tuple  # ((series, multiplicity), ...)
    source: object
    depth: Fraction
    separated: bool
    leaf_index: tuple = ()
    tree: object = None

    def total(self):
        return sum(m for _, m in self.roots)

    def to_json(self):
        return [{"terms": s.to_json(), "mult": m, "exact": s.trunc == INF} for s, m in self.roots]


def puiseux_roots(f, target_depth=None):
    """All complex Newton-Puiseux roots of f on the branch y > 0."""
    mini_regular_order(f)
    parts, _ = squarefree_split(f)
    tree = JointRoots([g for g, _ in parts], target_depth)
    return tree.bundle([e for _, e in parts], f)


def joint_roots(f, target_depth=None):
    """Roots of f and f_x in one tree; returns (tree, f weights, f_x weights)."""
    mini_regular_order(f)
    parts, h = squarefree_split(f)
    polys = [g for g, _ in parts]
    wf = [e for _, e in parts]
    wx = [e - 1 for _, e in parts]
    if h.x_degree() >= 1 or h.dots():
        polys.append(h)
        wf.append(0)
        wx.append(1)
    usable = [(p, a, b) for p, a, b in zip(polys, wf, wx) if any(q == 0 and i > 0 for i, q in p.dots())]
    polys = [p for p, _, _ in usable]
    tree = JointRoots(polys, target_depth)
    return tree, [a for _, a, _ in usable], [b for _, _, b in usable]


def normalize_family_boundary(F, t0=None):
    """Scale x so that the boundary restriction F(x, 0) becomes +-x^m.

    F is a BivarPoly (a family specialized at a sample t).  Returns
    (G, scale, sign) with G(u, y) = F(scale*u, y) and G(u, 0) = sign*u^m
    within ball radius.
    """
    boundary = [(i, c) for (i, q), c in F.terms.items() if q == 0 and not nb.is_zero(c)]
    if not boundary:
        raise ValueError("F(x, 0) vanishes identically")
    m, a = min(boundary)
    z = nb.to_acb(a)
    if z.contains(0):
        raise nb.UndecidableZero("boundary coefficient ball contains zero")
    sign = 1 if float(z.real.mid()) > 0 else -1
    if isinstance(a, Fraction) and abs(a) == 1:
        return F, Fraction(1), sign
    scale = nb.Ball(flint.acb(abs(z.real)) ** (flint.acb(-1) / m))
    G = BivarPoly({(i, q): c * scale ** i for (i, q), c in F.terms.items()}, F.trunc)
    return G, scale, sign

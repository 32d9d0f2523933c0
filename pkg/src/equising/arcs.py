"""Contact orders, heights, bars, initial forms and critical points.

Each branch (y > 0 and y < 0, the latter through f(x, -y)) is analysed with
one joint Newton-Puiseux tree for f and f_x.  Bars are materialized only when
they contain a B-root of f or of f_x: polar bars at the contact orders of
pairs of roots of f, the bar of each real root of f_x, and the singleton bars
of the real roots of f.
"""

from __future__ import annotations

import functools
import random
from dataclasses import dataclass
from fractions import Fraction

from . import numbers as nb
from . import upoly
from .numbers import INF, fmt_rat
from .poly import substitute_arc
from .puiseux import joint_roots, mini_regular_order
from .series import PuiseuxSeries

BRANCHES = ("pos", "neg")
MIN_GAP = Fraction(1, 64)


class AtLeast(Fraction):
    """A lower bound reported when two truncated series agree to their truncation."""

    def __repr__(self):
        return f">={fmt_rat(Fraction(self))}"


def contact_order(lam, mu):
    d = lam - mu
    o = d.order()
    if o == INF and d.trunc != INF:
        return AtLeast(d.trunc)
    return o


def f_height(f, lam, roots):
    """Maximal contact of lam with the roots in a RootBundle."""
    best = Fraction(0)
    for ser, _ in roots.roots:
        c = contact_order(lam, ser)
        if isinstance(c, AtLeast):
            raise nb.InsufficientDepth(f"arc agrees with a root up to y^{c}")
        best = max(best, c)
    return best


def branch_poly(f, branch):
    return f if branch == "pos" else f.flip_y()


@dataclass(frozen=True)
class Bar:
    branch: str
    prefix: PuiseuxSeries
    height: object
    I: tuple
    L: object
    m: int
    polar: bool
    singleton: bool
    rep: int = -1

    def arc(self, c):
        if self.height == INF:
            return self.prefix
        return self.prefix + PuiseuxSeries([(self.height, c)])

    def key(self):
        terms = tuple((e, nb.sort_key(c)) for e, c in self.prefix.terms)
        return (BRANCHES.index(self.branch), terms, self.height)

    def to_json(self):
        return {
            "branch": self.branch,
            "prefix": self.prefix.to_json(),
            "height": fmt_rat(self.height),
            "I": [fmt_value(c) for c in self.I],
            "L": fmt_rat(self.L),
            "m": self.m,
            "polar": self.polar,
            "singleton": self.singleton,
        }


@dataclass(frozen=True)
class FArc:
    branch: str
    prefix: PuiseuxSeries
    height: object
    coordinate: object


@dataclass(frozen=True)
class CriticalPoint:
    bar: Bar
    coordinate: object  # None for a singleton bar
    mult: int
    generic: bool
    value: tuple  # (I(c), L)
    leaf: int = -1
    series: object = None  # the arc lambda_B + c y^h in the coordinate's own field

    @property
    def branch(self):
        return self.bar.branch

    def arc(self):
        return self.series if self.series is not None else self.bar.arc(self.coordinate)

    def farc(self):
        return FArc(self.branch, self.bar.prefix, self.bar.height, self.coordinate)

    def to_json(self):
        return {
            "branch": self.branch,
            "prefix": self.bar.prefix.to_json(),
            "height": fmt_rat(self.bar.height),
            "c": None if self.coordinate is None else fmt_value(self.coordinate),
            "m": self.mult,
            "generic": self.generic,
            "value": [fmt_value(self.value[0]), fmt_rat(self.value[1])],
        }


def fmt_value(c):
    """Rationals as "p/q"; other reals as a 30-digit decimal midpoint."""
    if isinstance(c, (int, Fraction)):
        return fmt_rat(Fraction(c))
    with nb.precision(max(nb.default_precision(), 128)):
        z = nb.to_acb(c)
        re = z.real.mid().str(30, radius=False)
        if z.imag.contains(0):
            return re
        return f"{re}+{z.imag.mid().str(30, radius=False)}i"


def weighted_initial(G, h):
    """(I, L): least weight L of i*h + q over the dots of G, and its coefficient polynomial."""
    dots = G.dots()
    if not dots:
        return (), INF
    L = min(i * h + q for i, q in dots)
    deg = max(i for i, q in dots if i * h + q == L)
    I = [G.coeff(i, L - i * h) for i in range(deg + 1)]
    return tuple(I), L


def initial_form(f, bar_or_prefix, h=None):
    """(I, L) of f(lambda_B + u y^h, y); f already on the bar's branch."""
    if isinstance(bar_or_prefix, Bar):
        if bar_or_prefix.height == INF:
            return (), INF
        prefix, h = bar_or_prefix.prefix, bar_or_prefix.height
    else:
        prefix = bar_or_prefix
    G = substitute_arc(f, prefix)
    return weighted_initial(G, h)


def is_polar_form(I):
    I = upoly.trim(I)
    if len(I) <= 2:
        return False
    g = upoly.gcd(I, upoly.deriv(I))
    return len(g) - 1 < len(I) - 2


class BranchAnalysis:
    """Bars and critical points of f on one branch."""

    def __init__(self, f, branch, seed=0, target_depth=None, issued=None):
        self.branch = branch
        self.f = branch_poly(f, branch)
        self.fx = self.f.dx()
        self.tree, self.wf, self.wx = joint_roots(self.f, target_depth)
        T = self.tree
        self.fmult = [sum(w * a for w, a in zip(self.wf, lf.mults)) for lf in T.leaves]
        self.xmult = [sum(w * a for w, a in zip(self.wx, lf.mults)) for lf in T.leaves]
        self.F = [j for j, m in enumerate(self.fmult) if m > 0]
        self.X = [j for j, m in enumerate(self.xmult) if m > 0]
        self.bars = self._bars()
        self.critical = self._critical(seed, issued if issued is not None else [])

    def series(self, j):
        return self.tree.leaves[j].series

    def height_of(self, j):
        C = self.tree.contact
        return max((C[j][a] for a in self.F), default=Fraction(0))

    def _bars(self):
        T = self.tree
        C = T.contact
        cands = []
        for ai, a in enumerate(self.F):
            for b in self.F[ai + 1:]:
                cands.append((a, C[a][b]))
        for b in self.X:
            h = self.height_of(b)
            if h != INF:
                cands.append((b, h))
        chosen = []
        for j, h in cands:
            if any(h == h2 and C[j][j2] >= h for j2, h2 in chosen):
                continue
            if not T.real_below(j, h):
                continue
            chosen.append((j, h))
        bars = []
        for j, h in chosen:
            prefix = PuiseuxSeries([(e, c) for e, c in self.series(j).terms if e < h])
            I, L = initial_form(self.f, prefix, h)
            bars.append(Bar(self.branch, prefix, h, I, L, len(I) - 1, is_polar_form(I), False, j))
        for j in self.F:
            if T.is_real(j):
                m = self.fmult[j]
                bars.append(Bar(self.branch, self.series(j), INF, (), INF, m, m >= 2, True, j))
        bars.sort(key=Bar.key)
        return bars

    def b_roots(self, bar, which="f"):
        """[(coordinate, multiplicity, leaf)] of the B-roots of f or f_x."""
        T = self.tree
        C = T.contact
        idx, mult = (self.F, self.fmult) if which == "f" else (self.X, self.xmult)
        h = bar.height
        groups = []
        for j in idx:
            if C[j][bar.rep] < h:
                continue
            for g in groups:
                if C[j][g[2]] > h:
                    g[1] += mult[j]
                    break
            else:
                groups.append([self.series(j).coeff(h), mult[j], j])
        groups.sort(key=lambda g: nb.sort_key(g[0]))
        return [tuple(g) for g in groups]

    def _critical(self, seed, issued):
        T = self.tree
        C = T.contact
        out = []
        for bar in self.bars:
            if bar.singleton:
                if bar.m >= 2:
                    out.append(CriticalPoint(bar, None, bar.m - 1, False, (Fraction(0), INF), bar.rep, bar.prefix))
                continue
            h = bar.height
            xroots = self.b_roots(bar, "fx")
            if not xroots:
                continue
            found = []
            for c, m, j in xroots:
                real = T.contact[j][T.conj[j]] > h
                canonical = all(C[j][a] <= h for a in self.F if C[a][bar.rep] >= h)
                if real and canonical:
                    found.append((c, m, j))
            for c, m, j in found:
                # evaluate I in the coordinate's own field for an exact value
                own = PuiseuxSeries([(e, x) for e, x in self.series(j).terms if e < h])
                I_own, _ = initial_form(self.f, own, h)
                arc = own + PuiseuxSeries([(h, c)])
                out.append(CriticalPoint(bar, c, m, False, (upoly.evaluate(I_own, c), bar.L), j, arc))
            if not found and bar.polar:
                avoid = [c for c, _, j in self.b_roots(bar, "f") if nb.is_real(c)]
                avoid += [c for c, _, j in xroots if nb.is_real(c)]
                avoid += issued
                r = generic_coordinate(bar, avoid, seed)
                issued.append(r)
                out.append(CriticalPoint(bar, r, 1, True, (upoly.evaluate(bar.I, r), bar.L), bar.rep, bar.arc(r)))
        return out


def candidate_sequence(seed=0, size=400):
    """Seeded low-height rationals: shuffled within each height class."""
    pool = {Fraction(p, q) for q in range(1, 13) for p in range(-12, 13)}
    groups = {}
    for r in pool:
        groups.setdefault(max(abs(r.numerator), r.denominator), []).append(r)
    rng = random.Random(seed)
    out = []
    for hgt in sorted(groups):
        g = sorted(groups[hgt])
        rng.shuffle(g)
        out.extend(g)
    return out[:size]


def _far(r, a):
    if isinstance(a, (int, Fraction)):
        return abs(r - a) > MIN_GAP
    z = nb.to_acb(a) - nb.to_acb(r)
    d = abs(z)
    lo = float(d.lower()) if hasattr(d, "lower") else float(d.mid()) - float(d.rad())
    return lo > float(MIN_GAP)


def generic_coordinate(bar, avoid, seed=0):
    """First candidate at distance > 1/64 from every point of ``avoid``."""
    for r in candidate_sequence(seed):
        if all(_far(r, a) for a in avoid):
            return r
    raise ValueError("generic coordinate candidates exhausted")


class ArcAnalysis:
    def __init__(self, f, seed=0, branches=BRANCHES, target_depth=None):
        mini_regular_order(f)
        self.f = f
        self.seed = seed
        issued = []
        self.branches = {b: BranchAnalysis(f, b, seed, target_depth, issued) for b in branches}

    @property
    def bars(self):
        return [bar for b in self.branches.values() for bar in b.bars]

    @property
    def critical(self):
        return [c for b in self.branches.values() for c in b.critical]

    def complete_initial_form(self):
        return CompleteInitialForm(tuple((bar, bar.I) for bar in self.bars if bar.polar))


@dataclass(frozen=True)
class CompleteInitialForm:
    entries: tuple

    def to_json(self):
        return [dict(bar.to_json()) for bar, _ in self.entries]


@functools.lru_cache(maxsize=256)
def analyze(f, seed=0, branches=BRANCHES):
    return ArcAnalysis(f, seed, branches)


def enumerate_bars(f, branches=BRANCHES):
    return analyze(f, 0, tuple(branches)).bars


def critical_points(f, seed=0, branches=BRANCHES):
    return analyze(f, seed, tuple(branches)).critical


def complete_initial_form(f, branches=BRANCHES):
    a = analyze(f, 0, tuple(branches))
    cif = a.complete_initial_form()
    crit_bars = {id(c.bar) for c in a.critical}
    for bar, _ in cif.entries:
        if id(bar) not in crit_bars:
            raise AssertionError("polar bar without a critical point")
    return cif


def b_roots(f, bar, which="f"):
    a = analyze(f, 0, (bar.branch,))
    return a.branches[bar.branch].b_roots(bar, which)

"""Level-preserving vector fields for a family F(x, y; t) and their flows.

For an arc x = gamma_t(y) put X = x - gamma_t(Y), Y = y and
G(X, Y; t) = F(X + gamma_t(Y), Y; t).  The field

    V = (X G_X G_t / D) X d/dX + (Y G_Y G_t / D) Y d/dY - d/dt,
    D = (X G_X)^2 + (Y G_Y)^2,

is tangent to the level sets of G.  Fields attached to several arcs are
combined with the partition of unity p_i = q_i / sum q_j,
q_i = prod_{k != i} (x - alpha_k)^2, separately on y > 0 and y < 0, and
the two halves meet along y = 0 where the field is -d/dt.

Evaluation is generic over Python floats and flint arb balls; the latter
gives a rigorous tangency residual.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction

import flint
from scipy.integrate import solve_ivp

from . import numbers as nb
from .numbers import INF, TSeries
from .poly import BivarPoly, FamilyPoly


def _const(x, like):
    if isinstance(like, flint.arb):
        return flint.arb(nb.to_fmpq(x)) if isinstance(x, Fraction) else flint.arb(x)
    return float(x)


def _pow(y, q, like):
    """y^q for y > 0 (or integer q)."""
    q = Fraction(q)
    if q.denominator == 1:
        return y ** int(q)
    if isinstance(like, flint.arb):
        return y ** (flint.arb(q.numerator) / q.denominator)
    return y ** float(q)


def _poly_t(cs, t):
    """(p(t), p'(t)) for exact coefficients cs."""
    v = _const(0, t)
    d = _const(0, t)
    for c in reversed(cs):
        d = d * t + v
        v = v * t + _const(c, t)
    return v, d


def _real(c):
    if isinstance(c, (int, Fraction)):
        return Fraction(c)
    if not nb.is_real(c):
        raise ValueError("arc coefficient is not real")
    return c


class NumericFamily:
    """F(s(t) u, y; t) with s(t) = |a(t)|^(-1/m) when F(x, 0; t) = a(t) x^m.

    Terms are (i, q, coefficients in t); the boundary scaling makes
    F(u, 0; t) = +-u^m, so F_t vanishes on the x-axis.
    """

    def __init__(self, F, normalize=True):
        if isinstance(F, BivarPoly):
            F = FamilyPoly.constant(F)
        self.F = F
        self.terms = sorted((i, q, tuple(cs)) for (i, q), cs in F.tpoly.items())
        boundary = [(i, cs) for i, q, cs in self.terms if q == 0]
        self.scale_m = None
        if normalize and boundary:
            if len(boundary) != 1:
                raise ValueError("boundary F(x, 0; t) is not a single monomial in x")
            m, cs = boundary[0]
            if cs[0] == 0:
                raise ValueError("boundary coefficient vanishes at t = 0")
            if len(cs) > 1 or abs(cs[0]) != 1:
                self.scale_m = (m, cs)

    def scale(self, t):
        """(s(t), s'(t))."""
        if self.scale_m is None:
            return _const(1, t), _const(0, t)
        m, cs = self.scale_m
        a, da = _poly_t(cs, t)
        sgn = 1 if cs[0] > 0 else -1
        a, da = a * sgn, da * sgn
        if isinstance(t, flint.arb):
            s = a ** (flint.arb(-1) / m)
        else:
            s = a ** (-1.0 / m)
        return s, -s * da / (a * m)

    def derivs(self, u, y, t):
        """(F, F_u, F_y, F_t) of the scaled family; y may be negative only for integer exponents."""
        s, ds = self.scale(t)
        x = s * u
        Fv = Fx = Fy = Ft = _const(0, t)
        for i, q, cs in self.terms:
            a, da = _poly_t(cs, t)
            yq = _pow(y, q, t)
            xi = x ** i
            Fv = Fv + a * xi * yq
            Ft = Ft + da * xi * yq
            if i:
                xi1 = x ** (i - 1)
                Fx = Fx + a * i * xi1 * yq
            if q:
                Fy = Fy + a * _const(q, t) * xi * _pow(y, q - 1, t)
        # chain rule for x = s(t) u
        return Fv, Fx * s, Fy, Ft + Fx * ds * u

    def value(self, x, y, t):
        """F(x, y; t) in the original coordinates."""
        s, _ = self.scale(t)
        return self.derivs(x / s, y, t)[0]

    def mirrored(self):
        return NumericFamily(self.F.flip_y(), normalize=self.scale_m is not None)


class NumericArc:
    """x = gamma_t(y) with polynomial-in-t coefficients, in scaled coordinates."""

    def __init__(self, terms):
        # terms: [(e, [c_0, c_1, ...])] exact real coefficients of t^k
        self.terms = [(Fraction(e), tuple(_real(c) for c in cs)) for e, cs in terms]

    @classmethod
    def from_series(cls, s):
        terms = []
        for e, c in s.terms:
            if isinstance(c, TSeries):
                terms.append((e, list(c.c) or [Fraction(0)]))
            else:
                terms.append((e, [c]))
        return cls(terms)

    def eval(self, y, t, fam):
        """(gamma, d gamma/dy, d gamma/dt) in u-coordinates."""
        s, ds = fam.scale(t)
        g = dg = gt = _const(0, t)
        for e, cs in self.terms:
            cs_num = [nb.real_value(c) if not isinstance(c, Fraction) else c for c in cs]
            a, da = _poly_t(cs_num, t)
            ye = _pow(y, e, t)
            g = g + a * ye
            gt = gt + da * ye
            if e:
                dg = dg + a * _const(e, t) * _pow(y, e - 1, t)
        return g / s, dg / s, gt / s - g * ds / (s * s)


class SingularPoint(ArithmeticError):
    pass


def field_V(fam, arc, u, y, t, local=False):
    """(du/ds, dy/ds, dt/ds) of V for one arc; y > 0.

    With local=True the components are (dX/ds, dY/ds, dt/ds) in the shifted
    coordinates X = u - gamma_t(y), Y = y.
    """
    g, dg, gt = arc.eval(y, t, fam)
    X = u - g
    Y = y
    _, Fu, Fy, Ft = fam.derivs(u, y, t)
    GX = Fu
    GY = Fu * dg + Fy
    GT = Fu * gt + Ft
    D = (X * GX) ** 2 + (Y * GY) ** 2
    if isinstance(D, flint.arb):
        if D.contains(0):
            raise SingularPoint("denominator ball contains 0")
    elif D == 0 or not math.isfinite(D):
        raise SingularPoint("denominator vanishes")
    dX = X * X * GX * GT / D
    dY = Y * Y * GY * GT / D
    if local:
        return dX, dY, _const(-1, t)
    # back to (u, y): u = X + gamma_t(Y)
    return dX + dg * dY - gt, dY, _const(-1, t)


def partition_of_unity(arcs_vals, x):
    """p_i = q_i / sum q_j with q_i = prod_{k != i} (x - alpha_k)^2."""
    n = len(arcs_vals)
    if n == 1:
        return [x * 0 + 1]
    qs = []
    for i in range(n):
        q = x * 0 + 1
        for k, a in enumerate(arcs_vals):
            if k != i:
                q = q * (x - a) ** 2
        qs.append(q)
    tot = sum(qs[1:], qs[0])
    if isinstance(tot, flint.arb):
        if tot.contains(0):
            raise SingularPoint("point lies on two arcs")
    elif tot == 0:
        raise SingularPoint("point lies on two arcs")
    return [q / tot for q in qs]


@dataclass
class GluedField:
    pos: NumericFamily
    neg: NumericFamily
    pos_arcs: list
    neg_arcs: list

    def __call__(self, u, y, t):
        if y == 0:
            return _const(0, t), _const(0, t), _const(-1, t)
        if y > 0:
            fam, arcs, sgn = self.pos, self.pos_arcs, 1
        else:
            fam, arcs, sgn = self.neg, self.neg_arcs, -1
            y = -y
        vals = [a.eval(y, t, fam)[0] for a in arcs]
        ps = partition_of_unity(vals, u)
        du = dy = _const(0, t)
        for p, a in zip(ps, arcs):
            if p == 0:
                continue
            vu, vy, _ = field_V(fam, a, u, y, t)
            du = du + p * vu
            dy = dy + p * vy
        return du, dy * sgn, _const(-1, t)


def glued_field(F, chains=None, normalize=True):
    """Build the glued field from deformed critical arcs {branch: [series]}."""
    pos = NumericFamily(F, normalize)
    neg = pos.mirrored()
    chains = chains or {}
    zero = NumericArc([(1, [Fraction(0)])])
    pos_arcs = [NumericArc.from_series(s) for s in chains.get("pos", [])] or [zero]
    neg_arcs = [NumericArc.from_series(s) for s in chains.get("neg", [])] or [zero]
    return GluedField(pos, neg, pos_arcs, neg_arcs)


def critical_arcs(F, seed=0):
    """Deformed critical arcs of the family (the t = 0 arc where deformation fails)."""
    from .family import _prepare, deform_arc
    from .arcs import analyze
    if isinstance(F, BivarPoly):
        F = FamilyPoly.constant(F)
    F, _ = _prepare(F, seed)
    out = {"pos": [], "neg": []}
    for p in analyze(F.at(0), seed).critical:
        lam = p.arc()
        res = deform_arc(F, lam, p.branch)
        arc = res.arc if res.status == "success" else lam
        out[p.branch].append(_finite(arc))
    return F, out


def _finite(s):
    from .series import PuiseuxSeries
    terms = []
    for e, c in s.terms:
        if isinstance(c, TSeries) and c.prec is not None:
            c = TSeries(c.c, c.K)
        terms.append((e, c))
    return PuiseuxSeries(terms)


def tangency_residual(field, fam_pos, fam_neg, u, y, t):
    """dF/ds along the glued field at a point, as an arb ball."""
    du, dy, dt = field(u, y, t)
    fam = fam_pos if y >= 0 else fam_neg
    yy = y if y >= 0 else -y
    _, Fu, Fy, Ft = fam.derivs(u, yy, t)
    if y < 0:
        dy = -dy
    return Fu * du + Fy * dy + Ft * dt


@dataclass
class Trajectory:
    start: tuple
    status: str
    max_drift: float
    t_end: float
    points: list

    def to_json(self):
        return {"start": [repr(float(self.start[0])), repr(float(self.start[1]))],
                "max_drift": f"{self.max_drift:.3e}", "status": self.status,
                "t_end": repr(float(self.t_end))}


def integrate_flow(field, start, t_span=(0.0, 0.25), r_min=0.125, rtol=1e-10, atol=1e-12, box=1.0):
    """Follow -V from t = t_span[0]: d(u, y)/dt = -(du/ds, dy/ds).

    The drift is max |F(x(t), y(t); t) - F(x0, y0; t0)| / max(|F(x0, y0; t0)|, 1e-3)
    over the accepted steps.
    """
    fam = field.pos
    x0, y0 = float(start[0]), float(start[1])
    t0, t1 = float(t_span[0]), float(t_span[1])
    s0, _ = fam.scale(t0)
    u0 = x0 / s0
    F0 = _level(field, u0, y0, t0)
    norm = max(abs(F0), 1e-3)

    def rhs(t, z):
        du, dy, _ = field(z[0], z[1], t)
        return [-du, -dy]

    def wall(t, z):
        s, _ = fam.scale(t)
        r = max(abs(z[0] * s), abs(z[1]))
        return min(r - r_min / 2, box * 2 - r)

    wall.terminal = True
    try:
        sol = solve_ivp(rhs, (t0, t1), [u0, y0], method="DOP853", rtol=rtol, atol=atol,
                        events=wall)
    except SingularPoint:
        return Trajectory((x0, y0), "singular", math.nan, t0, [])
    drift = 0.0
    pts = []
    for t, u, y in zip(sol.t, sol.y[0], sol.y[1]):
        s, _ = fam.scale(t)
        pts.append((t, u * s, y))
        drift = max(drift, abs(_level(field, u, y, t) - F0) / norm)
    if sol.status == 1:
        status = "wall_exit"
    elif sol.status < 0:
        status = "singular"
    else:
        status = "ok"
    return Trajectory((x0, y0), status, drift, float(sol.t[-1]), pts)


def _level(field, u, y, t):
    if y >= 0:
        return field.pos.derivs(u, y, t)[0]
    return field.neg.derivs(u, -y, t)[0]


def seeded_starts(n, r_min=0.125, seed=0, radius=0.5):
    """n points with r_min <= max(|x|, |y|) <= radius and y != 0."""
    rng = random.Random(seed)
    out = []
    while len(out) < n:
        x = rng.uniform(-radius, radius)
        y = rng.uniform(-radius, radius)
        if max(abs(x), abs(y)) >= r_min and y != 0:
            out.append((x, y))
    return out


def flow_check(F, starts=10, r_min=0.125, t_span=(0.0, 0.25), rtol=1e-10, atol=1e-12, seed=0):
    F, chains = critical_arcs(F, seed)
    field = glued_field(F, chains)
    return [integrate_flow(field, p, t_span, r_min, rtol, atol)
            for p in seeded_starts(starts, r_min, seed)]


# weighted forms

def weighted_degree(W, h=None):
    """(h, d) for a weighted form in X, Y with w(X) = h, w(Y) = 1."""
    dots = sorted(W.terms)
    if not dots:
        raise ValueError("zero form")
    if h is None:
        cols = sorted({i for i, _ in dots})
        if len(cols) < 2:
            raise ValueError("weight h cannot be inferred from a single column")
        (i1, q1), (i2, q2) = min(dots), max(dots)
        h = Fraction(q1 - q2, i2 - i1)
    h = Fraction(h)
    ds = {i * h + q for i, q in dots}
    if len(ds) != 1:
        raise ValueError("not a weighted form for the given weight")
    return h, ds.pop()


def euler_lemma_check(W, u0, h=None):
    """v-order of |X W_X| + |Y W_Y| under X = u v^h, Y = v near u = u0.

    Returns {"h", "d", "order", "unit_nonzero"}.  Raises ValueError when u0
    is a multiple root of W(u, 1) or when W(u0, 1) = 0 = u0.
    """
    from . import upoly
    h, d = weighted_degree(W, h)
    u0 = Fraction(u0)
    deg = max(i for i, _ in W.terms)
    w = [Fraction(0)] * (deg + 1)
    for (i, q), c in W.terms.items():
        w[i] += c
    w0 = upoly.evaluate(w, u0)
    if w0 == 0 and upoly.evaluate(upoly.deriv(w), u0) == 0:
        raise ValueError(f"u0 = {nb.fmt_rat(u0)} is a multiple root of W(u, 1)")
    if w0 == 0 and u0 == 0:
        raise ValueError("W(u0, 1) = 0 and u0 = 0")
    # X W_X and Y W_Y after substitution: sum c * (i or q) u^i v^{i h + q}
    parts = []
    for which in (0, 1):
        acc = {}
        for (i, q), c in W.terms.items():
            k = i if which == 0 else q
            if k == 0:
                continue
            e = i * h + q
            acc.setdefault(e, [Fraction(0)] * (deg + 1))
            acc[e][i] += c * k
        parts.append(acc)
    orders = []
    unit = False
    for acc in parts:
        for e, poly in sorted(acc.items()):
            if upoly.evaluate(poly, u0) != 0:
                orders.append(e)
                if e == d:
                    unit = True
                break
    order = min(orders) if orders else INF
    return {"h": h, "d": d, "order": order, "unit_nonzero": unit}

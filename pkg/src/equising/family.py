"""Equisingularity checks for one-parameter families F(x, y; t).

Two engines cooperate:

* an exact engine works over Q[t]/(t^K).  It deforms an arc of f_0 by
  successive Tschirnhausen transforms so that the Newton polygon relative to
  the deformed arc stays the polygon at t = 0, or it exhibits a t-dependent
  dot below that polygon which no transform can clear;
* a sampled engine specializes t on a rational grid, runs the full arc
  calculus at each sample and links critical points (and polar bars) of
  adjacent samples into chains.

A "holds" verdict is certified on the grid and by the exact certificates
only; the conditions themselves quantify over an interval of t.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field
from fractions import Fraction

from . import numbers as nb
from . import upoly
from .arcs import (BRANCHES, CriticalPoint, analyze, branch_poly, fmt_value,
                   generic_coordinate, weighted_initial)
from .numbers import INF, TSeries, fmt_rat
from .polygon import edge_line, polygon_of
from .poly import BivarPoly, FamilyPoly, substitute_arc
from .puiseux import NotMiniRegular, field_roots, mini_regular_order, shear_normalize
from .series import PuiseuxSeries

DEFAULT_GRID = tuple(Fraction(x) for x in ("0", "1/8", "-1/8", "1/4", "-1/4", "1/2", "-1/2"))
DEFAULT_K = 8
EXTRA_DEPTH = 4
MAX_ITER = 2000

FAILS = "fails"
UNDECIDED = "undecided"


# exact engine

@dataclass
class TschirnState:
    G: object  # BivarPoly over TSeries
    arc: PuiseuxSeries
    cleared: int = 0


def _column_target(G0, m):
    """d^{m-1}/dX^{m-1} of G0 at X = 0, as a series in Y."""
    D = G0
    for _ in range(m - 1):
        D = D.dx()
    return D.column(0)


def tschirnhausen_step(state, r, P0, G0):
    """Shift X so that the (m_r - 1) column of the family equals that of G0.

    Solves d^{m_r-1}_X G(rho, Y) = d^{m_r-1}_X G0(0, Y) for rho over the
    t-series ring by fixed-point iteration; rho vanishes at t = 0.
    """
    m, q = P0.vertices[r]
    a = G0.coeff(m, q)
    if nb.is_zero(a):
        raise AssertionError("vertex coefficient vanishes at t = 0")
    G = state.G
    D = G
    for _ in range(m - 1):
        D = D.dx()
    target = _column_target(G0, m).truncate(G.trunc)
    inv = 1 / (math.factorial(m) * a)
    top = G.trunc - q
    rho = PuiseuxSeries([], top)
    for _ in range(MAX_ITER):
        # rho is an exact approximant; its O-term would only erode precision
        resid = substitute_arc(D, PuiseuxSeries(rho.terms)).column(0) - target
        low = [(e, c) for e, c in resid.terms if e < q]
        for e, c in low:
            if nb.is_zero(c):
                continue
            raise AssertionError(f"dot ({m - 1}, {e}) below the vertex line at step {r}")
        nxt = (rho - resid.shift(-q).scale(inv)).truncate(top)
        if nxt == rho:
            break
        rho = nxt
    else:
        raise ArithmeticError("Tschirnhausen iteration did not converge")
    if rho.terms:
        G = substitute_arc(G, PuiseuxSeries(rho.terms))
    for (i, e), c in G.terms.items():
        if i == m - 1:
            d = c - G0.coeff(i, e)
            if d.c:
                raise AssertionError(f"column {m - 1} not cleared at y^{e}")
    return TschirnState(G, state.arc + rho, state.cleared + 1), rho


@dataclass
class DeformResult:
    status: str  # "success" | "fails" | "undecided"
    arc: object
    polygon: object
    witnesses: list
    steps: list
    depth: object

    def to_json(self):
        return {
            "status": self.status,
            "arc": render_t_arc(self.arc) if self.arc is not None else None,
            "polygon": self.polygon.to_json() if self.polygon is not None else None,
            "witnesses": self.witnesses,
        }


def _render_t(c):
    return c.render() if isinstance(c, TSeries) else fmt_value(c)


def render_t_arc(s):
    parts = []
    for e, c in s.terms:
        cs = _render_t(c)
        parts.append(f"({cs})*y^{fmt_rat(e)}")
    return " + ".join(parts) or "0"


def _lift(lam, K):
    return PuiseuxSeries([(e, c if isinstance(c, TSeries) else TSeries([c], K)) for e, c in lam.terms])


def _dot_witness(i, q, c, where):
    try:
        zero = nb.is_zero(c)
    except nb.TruncationUndecided:
        return {"kind": "dot", "status": UNDECIDED, "dot": [i, fmt_rat(q)],
                "coefficient": c.render(), "below": where,
                "reason": f"coefficient vanishes modulo t^{c.prec}"}
    if zero:
        return None
    return {"kind": "dot", "status": FAILS, "dot": [i, fmt_rat(q)],
            "coefficient": c.render(), "below": where}


@functools.lru_cache(maxsize=512)
def deform_arc(F, lam, branch="pos"):
    """Deform the arc lam of f_0 so that the relative polygon is independent of t.

    lam is a finite exact series (a truncated root is used as given, without
    its O-term).  Returns a DeformResult; failure witnesses are the dots of
    the transformed family strictly below the polygon at t = 0, sorted by
    descending i then ascending q.
    """
    lam = PuiseuxSeries(lam.terms)
    Fb = branch_poly(F, branch)
    G = substitute_arc(Fb.poly, lam)
    G0 = G.map(lambda c: c.const_term())
    P0 = polygon_of(G0)
    k = len(P0.edges)
    intercepts = [edge_line(P0, j)[2] for j in range(1, k + 1)]
    check = max(intercepts + [P0.last[1]]) + 1 + (EXTRA_DEPTH if P0.vertical else 0)
    work = check + P0.last[1]
    G = G.truncate_y(work)
    state = TschirnState(G, _lift(lam, F.K))
    steps = []
    try:
        for r, (m, q) in enumerate(P0.vertices):
            if m == 0:
                break
            state, rho = tschirnhausen_step(state, r, P0, G0)
            steps.append(rho)
            if state.G.trunc < check:
                raise nb.InsufficientDepth("transformed family truncated below the check depth")
            if r < k:
                _, tan, c0 = edge_line(P0, r + 1)
                below = [(i, e) for (i, e) in state.G.terms if i * tan + e < c0]
                where = f"E{r + 1}"
            else:
                below = [(i, e) for (i, e) in state.G.terms if i < m and e < check]
                where = "vertical"
            wits = []
            for i, e in below:
                w = _dot_witness(i, e, state.G.terms[(i, e)], where)
                if w is not None:
                    wits.append(w)
            if wits:
                wits.sort(key=lambda w: (-w["dot"][0], Fraction(w["dot"][1])))
                status = FAILS if any(w["status"] == FAILS for w in wits) else UNDECIDED
                if status == FAILS:
                    wits = [w for w in wits if w["status"] == FAILS]
                return DeformResult(status, state.arc, P0, wits, steps, check)
    except nb.TruncationUndecided as exc:
        w = {"kind": "truncation", "status": UNDECIDED, "reason": str(exc)}
        return DeformResult(UNDECIDED, state.arc, P0, [w], steps, check)
    except nb.InsufficientDepth as exc:
        w = {"kind": "depth", "status": UNDECIDED, "reason": str(exc)}
        return DeformResult(UNDECIDED, state.arc, P0, [w], steps, check)
    return DeformResult("success", state.arc, P0, [], steps, check)


# sampled engine

@dataclass
class Sample:
    t: Fraction
    analysis: object
    shear: Fraction

    @property
    def critical(self):
        return self.analysis.critical

    @property
    def bars(self):
        return self.analysis.bars


@functools.lru_cache(maxsize=512)
def analyze_at_t(F, t0, seed=0):
    f = F.at(Fraction(t0))
    c = Fraction(0)
    try:
        mini_regular_order(f)
    except NotMiniRegular:
        f, c = shear_normalize(f, seed)
    return Sample(Fraction(t0), analyze(f, seed), c)


def _coeff_dist(a, b):
    return abs(nb.to_complex(a) - nb.to_complex(b))


def arc_distance(a, b):
    """Sum over exponents e of |a_e - b_e| / (1 + e)."""
    ca, cb = dict(a.terms), dict(b.terms)
    d = 0.0
    for e in sorted(set(ca) | set(cb)):
        d += _coeff_dist(ca.get(e, Fraction(0)), cb.get(e, Fraction(0))) / (1 + float(e))
    return d


def point_distance(p, q):
    if p.branch != q.branch or p.bar.singleton != q.bar.singleton:
        return INF
    dh = 0.0 if p.bar.height == q.bar.height else abs(float(p.bar.height) - float(q.bar.height))
    return arc_distance(p.arc(), q.arc()) + dh


def bar_distance(b, c):
    if b.branch != c.branch or b.singleton != c.singleton:
        return INF
    dh = 0.0 if b.height == c.height else abs(float(b.height) - float(c.height))
    return arc_distance(b.prefix, c.prefix) + dh


def greedy_match(prev, nxt, dist):
    """Greedy bijective partial matching on sorted distances; ties by list order."""
    cand = []
    for i, p in enumerate(prev):
        for j, q in enumerate(nxt):
            d = dist(p, q)
            if d != INF:
                cand.append((d, i, j))
    cand.sort()
    used_i, used_j, pairs = set(), set(), []
    for _, i, j in cand:
        if i in used_i or j in used_j:
            continue
        used_i.add(i)
        used_j.add(j)
        pairs.append((i, j))
    pairs.sort()
    lost = [i for i in range(len(prev)) if i not in used_i]
    new = [j for j in range(len(nxt)) if j not in used_j]
    return pairs, lost, new


def match_critical_points(prev, nxt):
    """(pairs, unmatched prev indices, unmatched next indices)."""
    return greedy_match(prev, nxt, point_distance)


def grid_sides(grid):
    """The grid split into outward runs from t = 0."""
    grid = sorted(set(Fraction(t) for t in grid))
    if Fraction(0) not in grid:
        raise ValueError("the t-grid must contain 0")
    pos = [t for t in grid if t > 0]
    neg = sorted((t for t in grid if t < 0), reverse=True)
    return [s for s in (pos, neg) if s]


def _point_record(t, p):
    return {"t": fmt_rat(t), "c": None if p.coordinate is None else fmt_value(p.coordinate),
            "m": p.mult, "h": fmt_rat(p.bar.height), "L": fmt_rat(p.bar.L),
            "value": [fmt_value(p.value[0]), fmt_rat(p.value[1])]}


def _with_generic(p0, q):
    """Re-evaluate a generic point at the same r as its t = 0 ancestor."""
    if not (p0.generic and q.generic):
        return q
    r = p0.coordinate
    bar = q.bar
    return CriticalPoint(bar, r, 1, True, (upoly.evaluate(bar.I, r), bar.L), bar.rep, bar.arc(r))


def _sample_all(F, grid, seed):
    out = {}
    for t in sorted(set(Fraction(x) for x in grid)):
        out[t] = analyze_at_t(F, t, seed)
    return out


def _prepare(F, seed):
    """Shear the family once if f_0 is not mini-regular."""
    try:
        mini_regular_order(F.at(0))
        return F, Fraction(0)
    except NotMiniRegular:
        _, c = shear_normalize(F.at(0), seed)
        return F.shear(c), c


def build_chains(samples, grid):
    """Chains of critical points from t = 0 outwards, plus unmatched witnesses."""
    base = samples[Fraction(0)].critical
    chains = [{Fraction(0): p} for p in base]
    wits = []
    for side in grid_sides(grid):
        prev_t = Fraction(0)
        alive = list(range(len(base)))
        for t in side:
            nxt = samples[t].critical
            prev = [chains[k][prev_t] for k in alive]
            pairs, lost, new = match_critical_points(prev, nxt)
            for i in lost:
                wits.append({"kind": "unmatched", "status": FAILS, "t": fmt_rat(t),
                             "side": "previous", "point": _point_record(prev_t, prev[i])})
            for j in new:
                wits.append({"kind": "unmatched", "status": FAILS, "t": fmt_rat(t),
                             "side": "next", "point": _point_record(t, nxt[j])})
            still = []
            for i, j in pairs:
                k = alive[i]
                chains[k][t] = _with_generic(chains[k][Fraction(0)], nxt[j])
                still.append(k)
            alive = still
            prev_t = t
    return chains, wits


@dataclass
class FamilyVerdict:
    condition: str
    chains: list
    witnesses: list
    extra: dict = field(default_factory=dict)

    @property
    def holds(self):
        return not self.witnesses

    @property
    def undecided(self):
        return bool(self.witnesses) and all(w["status"] == UNDECIDED for w in self.witnesses)

    @property
    def fails(self):
        return any(w["status"] == FAILS for w in self.witnesses)

    def to_json(self):
        out = {"condition": self.condition, "holds": self.holds, "undecided": self.undecided,
               "chains": self.chains, "witnesses": self.witnesses}
        out.update(self.extra)
        return out


def _invariants(p):
    return (p.mult, p.bar.height, p.bar.L)


def _fmt_inv(v):
    return [v[0], fmt_rat(v[1]), fmt_rat(v[2])]


def _deform_record(res):
    rec = res.to_json()
    if res.status == "success":
        P = res.polygon
        if P.edges and not P.vertical:
            _, tan, c0 = edge_line(P, len(P.edges))
            rec["predicted"] = {"h": fmt_rat(tan), "L": fmt_rat(c0)}
    return rec


def _assemble(exact, sampled):
    """Exact-engine witnesses first; sampled evidence is decisive only when the
    exact engine decided every arc."""
    blocked = any(w["status"] == UNDECIDED for w in exact) and not any(w["status"] == FAILS for w in exact)
    if blocked:
        sampled = [dict(w, status=UNDECIDED, reason="exact engine undecided at this t-order")
                   if w["status"] == FAILS else w for w in sampled]
    return exact + sampled, blocked


def _condition_a(F, grid, seed):
    F, c = _prepare(F, seed)
    samples = _sample_all(F, grid, seed)
    chains, sampled = build_chains(samples, grid)
    exact, records = [], []
    for chain in chains:
        p0 = chain[Fraction(0)]
        res = deform_arc(F, p0.arc(), p0.branch)
        for w in res.witnesses:
            exact.append(dict(w, branch=p0.branch, point=_point_record(0, p0)))
        inv0 = _invariants(p0)
        for t in sorted(chain, key=lambda s: (abs(s), s)):
            if t == 0:
                continue
            inv = _invariants(chain[t])
            if inv != inv0:
                sampled.append({"kind": "invariant_change", "status": FAILS, "t": fmt_rat(t),
                                "branch": p0.branch, "from": _fmt_inv(inv0), "to": _fmt_inv(inv)})
        records.append({
            "branch": p0.branch,
            "deformation": _deform_record(res),
            "samples": [_point_record(t, chain[t]) for t in sorted(chain)],
        })
    wits, blocked = _assemble(exact, sampled)
    extra = {"shear": fmt_rat(c)} if c else {}
    return FamilyVerdict("a", records, wits, extra), chains, F, blocked


def check_condition_a(F, grid=DEFAULT_GRID, seed=0):
    return _condition_a(F, tuple(grid), seed)[0]


def values_equal(u, v):
    """Exact equality of two critical values (I(c), L); balls escalate."""
    if u[1] != v[1]:
        return False
    a, b = u[0], v[0]
    if isinstance(a, (int, Fraction)) and isinstance(b, (int, Fraction)):
        return a == b
    if isinstance(a, nb.AlgNum) and isinstance(b, nb.AlgNum):
        return nb.alg_eq(a, b)
    if isinstance(a, nb.AlgNum) or isinstance(b, nb.AlgNum):
        return False  # an irrational number never equals a rational one
    return nb.escalate(lambda: nb.is_zero(nb.Ball(a) - nb.Ball(b)))


def _safe_equal(u, v):
    try:
        return values_equal(u, v)
    except nb.UndecidableZero:
        return None


def check_condition_A(F, grid=DEFAULT_GRID, seed=0):
    va, chains, F, blocked = _condition_a(F, tuple(grid), seed)
    wits = []
    coincide = []
    for i in range(len(chains)):
        for j in range(i + 1, len(chains)):
            p, q = chains[i][Fraction(0)], chains[j][Fraction(0)]
            eq = _safe_equal(p.value, q.value)
            if eq is None:
                wits.append({"kind": "value_coincidence", "status": UNDECIDED, "t": "0",
                             "pair": [i, j], "reason": "equality undecided at precision cap"})
            elif eq:
                coincide.append([i, j])
    for i, j in coincide:
        for t in sorted(set(chains[i]) & set(chains[j])):
            if t == 0:
                continue
            eq = _safe_equal(chains[i][t].value, chains[j][t].value)
            if eq is None:
                wits.append({"kind": "value_coincidence", "status": UNDECIDED, "t": fmt_rat(t),
                             "pair": [i, j], "reason": "equality undecided at precision cap"})
            elif not eq:
                wits.append({"kind": "value_coincidence", "status": FAILS, "t": fmt_rat(t),
                             "pair": [i, j],
                             "values": [_point_record(t, chains[i][t])["value"],
                                        _point_record(t, chains[j][t])["value"]]})
    if blocked:
        wits = [dict(w, status=UNDECIDED) for w in wits]
    extra = dict(va.extra, coincidences=coincide)
    return FamilyVerdict("A", va.chains, list(va.witnesses) + wits, extra)


# Morse and zero stability of a family of univariate polynomials

def real_critical_points(p):
    """[(c, mult, p(c))] over the real roots c of p', sorted by value of c."""
    p = upoly.trim(p)
    dp = upoly.deriv(p)
    if len(dp) <= 1:
        return []
    out = []
    if upoly.is_rational(dp):
        for c, e in upoly.exact_roots_q(dp):
            if nb.is_real(c):
                out.append((c, e, upoly.evaluate(p, c)))
    else:
        F, emb = next((c.field, c.emb) for c in dp if isinstance(c, nb.AlgNum))
        for piece, e in upoly.squarefree_decomposition(dp):
            for c, conv, _ in field_roots(piece, F, emb):
                if not nb.is_real(c):
                    continue
                pc = [conv(x) for x in p] if conv is not None else p
                out.append((c, e, upoly.evaluate(pc, c)))
    out.sort(key=lambda r: nb.sort_key(r[0]))
    return out


def _is_zero_value(v):
    try:
        return nb.escalate(lambda: nb.is_zero(v))
    except nb.UndecidableZero:
        return None


def univariate_morse_zero_stable(p, grid=DEFAULT_GRID):
    """Morse and zero stability of p_t on the grid.

    p is a sequence of TSeries (coefficients of u^0, u^1, ...) or a mapping
    from grid points to exact coefficient lists.
    """
    wits = []
    if isinstance(p, dict):
        samples = {Fraction(t): upoly.trim(v) for t, v in p.items()}
    else:
        samples = {}
        for t in grid:
            try:
                samples[Fraction(t)] = upoly.trim([c.at(Fraction(t)) for c in p])
            except nb.TruncationUndecided:
                wits.append({"kind": "truncation", "status": UNDECIDED, "t": fmt_rat(t),
                             "reason": "coefficient series truncated"})
        if wits:
            return FamilyVerdict("morse", [], wits)
    p0 = samples.get(Fraction(0))
    if not p0 or nb.is_zero(p0[-1]):
        raise ValueError("leading coefficient vanishes at t = 0")
    deg0 = len(p0) - 1
    crit = {t: real_critical_points(v) for t, v in samples.items()}
    base = crit[Fraction(0)]
    chains = [{Fraction(0): c} for c in base]
    sides = [[t for t in side if t in samples] for side in grid_sides(list(samples))]
    for t, v in samples.items():
        if len(v) - 1 != deg0:
            wits.append({"kind": "degree_drop", "status": FAILS, "t": fmt_rat(t)})
    for side in sides:
        prev_t = Fraction(0)
        alive = list(range(len(base)))
        for t in side:
            prev = [chains[k][prev_t] for k in alive]
            nxt = crit[t]
            pairs, lost, new = greedy_match(prev, nxt, lambda a, b: _coeff_dist(a[0], b[0]))
            for i in lost:
                wits.append({"kind": "unmatched", "status": FAILS, "t": fmt_rat(t), "side": "previous",
                             "c": fmt_value(prev[i][0]), "m": prev[i][1]})
            for j in new:
                wits.append({"kind": "unmatched", "status": FAILS, "t": fmt_rat(t), "side": "next",
                             "c": fmt_value(nxt[j][0]), "m": nxt[j][1]})
            still = []
            for i, j in pairs:
                k = alive[i]
                if nxt[j][1] != prev[i][1]:
                    wits.append({"kind": "multiplicity_change", "status": FAILS, "t": fmt_rat(t),
                                 "c": fmt_value(nxt[j][0]), "from": prev[i][1], "to": nxt[j][1]})
                chains[k][t] = nxt[j]
                still.append(k)
            alive = still
            prev_t = t
    for i in range(len(chains)):
        for j in range(i + 1, len(chains)):
            same = _safe_equal((chains[i][0][2], 0), (chains[j][0][2], 0))
            if not same:
                continue
            for t in sorted(set(chains[i]) & set(chains[j])):
                eq = _safe_equal((chains[i][t][2], 0), (chains[j][t][2], 0))
                if eq is None:
                    wits.append({"kind": "value_coincidence", "status": UNDECIDED, "t": fmt_rat(t)})
                elif not eq:
                    wits.append({"kind": "value_coincidence", "status": FAILS, "t": fmt_rat(t),
                                 "pair": [fmt_value(chains[i][0][0]), fmt_value(chains[j][0][0])]})
    for chain in chains:
        if not _is_zero_value(chain[0][2]):
            continue
        for t, (c, _, v) in sorted(chain.items()):
            z = _is_zero_value(v)
            if z is None:
                wits.append({"kind": "zero_value", "status": UNDECIDED, "t": fmt_rat(t)})
            elif not z:
                wits.append({"kind": "zero_value", "status": FAILS, "t": fmt_rat(t),
                             "c": fmt_value(c), "value": fmt_value(v)})
    records = [{"samples": [{"t": fmt_rat(t), "c": fmt_value(c), "m": m, "value": fmt_value(v)}
                            for t, (c, m, v) in sorted(ch.items())]} for ch in chains]
    return FamilyVerdict("morse", records, wits)


# condition (A')

def _bar_inv(b):
    return (b.height, b.m, b.L)


def _t_initial_form(F, branch, arc, h, L):
    """Initial form along the deformed bar prefix over the t-series ring."""
    Fb = branch_poly(F, branch)
    prefix = PuiseuxSeries([(e, c) for e, c in arc.terms if e < h])
    G = substitute_arc(Fb.poly, prefix).truncate_y(L * 2 + 4)
    I, L_t = weighted_initial(G, h)
    return I, L_t


def check_condition_Aprime(F, grid=DEFAULT_GRID, seed=0):
    grid = tuple(grid)
    F, shear_c = _prepare(F, seed)
    samples = _sample_all(F, grid, seed)
    base = [b for b in samples[Fraction(0)].bars if b.polar]
    wits, exact, records = [], [], []
    chains = [{Fraction(0): b} for b in base]
    for side in grid_sides(grid):
        prev_t = Fraction(0)
        alive = list(range(len(base)))
        for t in side:
            prev = [chains[k][prev_t] for k in alive]
            nxt = [b for b in samples[t].bars if not b.singleton or b.m >= 2]
            pairs, lost, _ = greedy_match(prev, nxt, bar_distance)
            for i in lost:
                wits.append({"kind": "bar_unmatched", "status": FAILS, "t": fmt_rat(t),
                             "branch": prev[i].branch, "height": fmt_rat(prev[i].height)})
            still = []
            for i, j in pairs:
                chains[alive[i]][t] = nxt[j]
                still.append(alive[i])
            alive = still
            prev_t = t
    for chain in chains:
        b0 = chain[Fraction(0)]
        rec = {"branch": b0.branch, "height": fmt_rat(b0.height), "m": b0.m, "L": fmt_rat(b0.L)}
        if b0.singleton:
            arc0 = b0.prefix
        else:
            avoid = [c for c, _ in upoly.exact_roots_q(b0.I) if nb.is_real(c)] if upoly.is_rational(b0.I) else []
            arc0 = b0.arc(generic_coordinate(b0, avoid, seed))
        res = deform_arc(F, arc0, b0.branch)
        rec["deformation"] = _deform_record(res)
        for w in res.witnesses:
            exact.append(dict(w, branch=b0.branch, bar_height=fmt_rat(b0.height)))
        inv0 = _bar_inv(b0)
        constant = [all(_bar_inv(b)[k] == inv0[k] for b in chain.values()) for k in range(3)]
        rec["constant"] = dict(zip(("h", "m", "L"), constant))
        if sum(constant) < 2:
            wits.append({"kind": "invariant_change", "status": FAILS, "branch": b0.branch,
                         "height": fmt_rat(b0.height), "constant": rec["constant"]})
        elif sum(constant) == 2:
            wits.append({"kind": "third_invariant", "status": FAILS, "branch": b0.branch,
                         "height": fmt_rat(b0.height), "constant": rec["constant"]})
        if not b0.singleton:
            fam = {t: list(b.I) for t, b in chain.items() if not b.singleton}
            if res.status == "success":
                try:
                    I_t, _ = _t_initial_form(F, b0.branch, res.arc, b0.height, b0.L)
                    rec["I_family"] = [_render_t(c) for c in I_t]
                except (nb.TruncationUndecided, nb.InsufficientDepth):
                    rec["I_family"] = None
            mv = univariate_morse_zero_stable(fam, sorted(fam))
            rec["morse"] = {"holds": mv.holds, "chains": mv.chains}
            for w in mv.witnesses:
                wits.append(dict(w, kind="morse_" + w["kind"], branch=b0.branch,
                                 height=fmt_rat(b0.height)))
        rec["samples"] = [{"t": fmt_rat(t), "h": fmt_rat(b.height), "m": b.m, "L": fmt_rat(b.L),
                           "I": [fmt_value(c) for c in b.I]} for t, b in sorted(chain.items())]
        records.append(rec)
    wits, _ = _assemble(exact, wits)
    extra = {"shear": fmt_rat(shear_c)} if shear_c else {}
    return FamilyVerdict("Aprime", records, wits, extra)


CHECKS = {"a": check_condition_a, "A": check_condition_A, "Aprime": check_condition_Aprime}


def check_family(F, conditions=("a", "A", "Aprime"), grid=DEFAULT_GRID, seed=0):
    if isinstance(F, BivarPoly):
        F = FamilyPoly.constant(F, DEFAULT_K)
    out = []
    for name in conditions:
        try:
            out.append(CHECKS[name](F, grid, seed))
        except nb.UndecidableZero as exc:
            out.append(FamilyVerdict(name, [], [{"kind": "precision", "status": UNDECIDED,
                                                 "reason": str(exc)}]))
        except nb.InsufficientDepth as exc:
            out.append(FamilyVerdict(name, [], [{"kind": "depth", "status": UNDECIDED,
                                                 "reason": str(exc)}]))
    return out

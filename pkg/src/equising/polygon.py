"""Newton polygons relative to an arc."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import numbers as nb
from .numbers import INF, fmt_rat
from .poly import substitute_arc


@dataclass(frozen=True)
class Edge:
    tan: Fraction
    dots: tuple  # all dots on the segment, sorted by descending i


@dataclass(frozen=True)
class Polygon:
    vertices: tuple  # ((m_0, 0), ..., (m_k, q_k)), m strictly decreasing
    edges: tuple
    vertical: bool

    @property
    def last(self):
        return self.vertices[-1]

    def to_json(self):
        return {
            "vertices": [[m, fmt_rat(q)] for m, q in self.vertices],
            "edges": [{"tan": fmt_rat(e.tan), "dots": [[i, fmt_rat(q)] for i, q in e.dots]}
                      for e in self.edges],
            "vertical": self.vertical,
        }


def polygon_of_dots(dots):
    """Lower-left hull of a finite dot set, from the x-axis side leftwards."""
    dots = sorted(set((int(i), Fraction(q)) for i, q in dots))
    if not dots:
        raise ValueError("empty dot set has no polygon")
    qmin = min(q for _, q in dots)
    v = min(i for i, q in dots if q == qmin)
    vertices = [(v, qmin)]
    edges = []
    cur = (v, qmin)
    while True:
        left = [d for d in dots if d[0] < cur[0]]
        if not left:
            break
        slopes = [((q - cur[1]) / (cur[0] - i), i, q) for i, q in left]
        tan = min(s for s, _, _ in slopes)
        on = [(i, q) for s, i, q in slopes if s == tan]
        nxt = min(on)
        seg = sorted([cur] + on, reverse=True)
        edges.append(Edge(tan, tuple(seg)))
        vertices.append(nxt)
        cur = nxt
    return Polygon(tuple(vertices), tuple(edges), vertices[-1][0] >= 1)


def relative_polygon(f, lam):
    """Polygon of f(X + lam(Y), Y)."""
    G = substitute_arc(f, lam)
    return polygon_of(G)


def polygon_of(G):
    dots = G.dots()
    if not dots:
        raise ValueError("zero polynomial has no polygon")
    P = polygon_of_dots(dots)
    if G.trunc != INF:
        # dots at y-exponent >= trunc are unknown; they cannot matter only if
        # every edge line and the last vertex sit strictly below the cutoff
        top = max([edge_line(P, k)[2] for k in range(1, len(P.edges) + 1)] + [P.last[1]])
        if P.last[0] > 0 or top >= G.trunc:
            raise nb.InsufficientDepth(f"polygon not determined below y^{G.trunc}")
    return P


def edge_line(P, i):
    """(anchor vertex, tan, y-intercept) of the line through edge E_i (1-based)."""
    if not 1 <= i <= len(P.edges):
        raise IndexError(f"edge index {i} out of range 1..{len(P.edges)}")
    m, q = P.vertices[i - 1]
    tan = P.edges[i - 1].tan
    return (m, q), tan, q + m * tan


def line_value(line, dot):
    _, tan, _ = line
    return dot[0] * tan + dot[1]


def dots_below(dots, line):
    """Dots strictly below the line i*tan + q = intercept."""
    _, tan, c = line
    return sorted((i, q) for i, q in dots if i * tan + q < c)


def vanishing_class(P):
    m = P.last[0]
    if m == 0:
        return "nonvanishing"
    return "vanishes_on_arc" if m == 1 else "singular_on_arc"


def edge_polynomial(G, edge):
    """Coefficients of sum a_{iq} u^{i - i_min} over the dots on an edge."""
    lo = min(i for i, _ in edge.dots)
    hi = max(i for i, _ in edge.dots)
    out = [Fraction(0)] * (hi - lo + 1)
    for i, q in edge.dots:
        out[i - lo] = G.coeff(i, q)
    return out

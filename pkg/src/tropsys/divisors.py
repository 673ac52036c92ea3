"""Chip-firing moves on metric graphs and their decompositions."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable, Optional

import numpy as np

from .errors import EmptySubgraph, InvalidInput, RankMismatch
from .finite import FiniteModel
from .functions import Divisor, PLFunction, tropical_sum
from .graph import (ClosedSubgraph, GraphPoint, MetricGraph, as_fraction, integer_scale_factor,
                    scale, scale_point, subdivide, subdivision_point, subdivision_vertex)


def canonical_divisor(G: MetricGraph) -> Divisor:
    """K = sum over points of (valence - 2) * point."""
    return Divisor((G.vertex_point(v), G.degree(v) - 2) for v in G.vertices)


def order_at(f: PLFunction, x: GraphPoint) -> int:
    return f.order_at(x)


def principal_divisor(f: PLFunction) -> Divisor:
    return f.principal_divisor()


def tropical_combine(terms) -> PLFunction:
    """Pointwise max of ``coefficient + f`` over ``(coefficient, f)`` terms."""
    terms = list(terms)
    if not terms:
        raise InvalidInput("tropical_combine needs at least one term")
    return tropical_sum(f + as_fraction(c) for c, f in terms)


# -- level sets ---------------------------------------------------------------

def level_set(f: PLFunction, c) -> ClosedSubgraph:
    """Closed subgraph where ``f`` equals ``c``."""
    c = as_fraction(c)
    G = f.graph
    verts = [v for v in G.vertices if f.vertex_value(v) == c]
    ivs: dict = {}
    for e in G.edges:
        bps = f.breakpoints(e.id)
        for i, (x, y) in enumerate(bps):
            if y != c:
                continue
            if i + 1 < len(bps) and bps[i + 1][1] == c:
                ivs.setdefault(e.id, []).append((x, bps[i + 1][0]))
            else:
                ivs.setdefault(e.id, []).append((x, x))
    return ClosedSubgraph.make(G, verts, ivs)


def superlevel_set(f: PLFunction, c) -> ClosedSubgraph:
    """Closed subgraph where ``f >= c``."""
    c = as_fraction(c)
    G = f.graph
    verts = [v for v in G.vertices if f.vertex_value(v) >= c]
    ivs: dict = {}
    for e in G.edges:
        bps = f.breakpoints(e.id)
        for (x0, y0), (x1, y1) in zip(bps, bps[1:]):
            if y0 >= c and y1 >= c:
                ivs.setdefault(e.id, []).append((x0, x1))
            elif y0 >= c:
                ivs.setdefault(e.id, []).append((x0, x0 + (x1 - x0) * (y0 - c) / (y0 - y1)))
            elif y1 >= c:
                ivs.setdefault(e.id, []).append((x1 - (x1 - x0) * (y1 - c) / (y1 - y0), x1))
    return ClosedSubgraph.make(G, verts, ivs)


# -- simple chip firing ------------------------------------------------------------

def chip_firing_function(G: MetricGraph, sub: ClosedSubgraph, l) -> PLFunction:
    """CF(sub, l)(x) = -min(l, dist(x, sub))."""
    l = as_fraction(l)
    if sub.is_empty():
        raise EmptySubgraph("cannot fire the empty subgraph")
    if sub.is_whole(G):
        raise InvalidInput("the firing subgraph must be proper")
    if l <= 0:
        raise InvalidInput("firing distance must be positive")
    ivm = sub.interval_map()
    sources = {v: Fraction(0) for v in sub.vertices}
    for eid, lst in ivm.items():
        e = G.edge(eid)
        a = min(iv[0] for iv in lst)
        b = max(iv[1] for iv in lst)
        if e.tail not in sources or a < sources[e.tail]:
            sources[e.tail] = a
        if e.head not in sources or e.length - b < sources[e.head]:
            sources[e.head] = e.length - b
    dv = G.vertex_distances(sources)
    data = {}
    for e in G.edges:
        L = e.length
        ivs = ivm.get(e.id, ())
        up = [dv[e.tail]] + [-b for _, b in ivs]          # c + t
        down = [dv[e.head] + L] + [a for a, _ in ivs]      # c - t

        def dist(t):
            best = min(dv[e.tail] + t, dv[e.head] + L - t)
            for a, b in ivs:
                best = min(best, max(a - t, Fraction(0), t - b))
            return best

        grid = {Fraction(0), L}
        for a, b in ivs:
            grid.update((a, b))
        for c1 in up:
            grid.add(l - c1)
            for c2 in down:
                grid.add((c2 - c1) / 2)
        for c2 in down:
            grid.add(c2 - l)
        pts = sorted(t for t in grid if 0 <= t <= L)
        data[e.id] = [(t, -min(l, dist(t))) for t in pts]
    return PLFunction(G, data)


def _next_obstacle(G: MetricGraph, D: Divisor, sub: ClosedSubgraph, d, movers) -> Fraction:
    """Free distance for a chip leaving along germ ``d``."""
    L = G.length(d.edge)
    t0 = d.offset
    limit = (L - t0) if d.sign > 0 else t0
    for p in D.support:
        if not p.is_vertex and p.ident == d.edge:
            gap = (p.offset - t0) * d.sign
            if 0 < gap < limit:
                limit = gap
    for a, b in sub.interval_map().get(d.edge, ()):
        for x in (a, b):
            gap = (x - t0) * d.sign
            if 0 < gap < limit:
                limit = gap
    for other in movers:
        if other.edge == d.edge and other.sign == -d.sign:
            gap = (other.offset - t0) * d.sign
            if gap > 0 and gap / 2 < limit:
                limit = gap / 2
    return limit


def can_fire(G: MetricGraph, D: Divisor, sub: ClosedSubgraph) -> Optional[Fraction]:
    """Largest distance ``sub`` can fire on effective ``D``, or ``None``."""
    bd = sub.boundary_directions(G)
    if not bd or sub.is_whole(G):
        return None
    for p, dirs in bd.items():
        if D[p] < len(dirs):
            return None
    movers = [d for dirs in bd.values() for d in dirs]
    return min(_next_obstacle(G, D, sub, d, movers) for d in movers)


# -- weighted moves -------------------------------------------------------------

@dataclass(frozen=True)
class WeightedChipFiringMove:
    """Function constant on two disjoint closed subgraphs, linear between."""

    low: ClosedSubgraph
    high: ClosedSubgraph
    function: PLFunction

    @property
    def gap(self) -> Fraction:
        return self.function.max_value - self.function.min_value

    def segments(self):
        """Open segments between the levels: ``(edge, x0, x1, slope)``.

        ``slope`` is taken in the direction from the low to the high level.
        """
        f = self.function
        out = []
        for e in f.graph.edges:
            bps = f.breakpoints(e.id)
            for (x0, y0), (x1, y1) in zip(bps, bps[1:]):
                if y0 != y1:
                    out.append((e.id, x0, x1, abs((y1 - y0) / (x1 - x0))))
        return out


def weighted_move(f: PLFunction) -> WeightedChipFiringMove:
    lo, hi = f.min_value, f.max_value
    G = f.graph
    vals = {f.vertex_value(v) for v in G.vertices} | {f(p) for p in f.corner_points()}
    if lo == hi or not vals <= {lo, hi}:
        raise InvalidInput("function is not a weighted chip firing move")
    return WeightedChipFiringMove(level_set(f, lo), level_set(f, hi), f)


def _critical_values(f: PLFunction) -> list[Fraction]:
    G = f.graph
    vals = {f.vertex_value(v) for v in G.vertices} | {f(p) for p in f.corner_points()}
    return sorted(vals)


def decompose_function(f: PLFunction) -> list[WeightedChipFiringMove]:
    """Split ``f`` into weighted moves whose ordinary sum is ``f`` up to a constant.

    Recursively cuts at the median critical value ``c`` using
    ``f = min(c, f) + max(c, f) - c``.
    """
    vals = _critical_values(f)
    if len(vals) <= 1:
        return []
    if len(vals) == 2:
        return [weighted_move(f)]
    c = vals[len(vals) // 2]
    return decompose_function(f.clip_above(c)) + decompose_function(f.clip_below(c))


def decompose_weighted_move(m: WeightedChipFiringMove) -> list[PLFunction]:
    """Write a weighted move as a sum of simple chip firing moves.

    Returns ``lcm`` of the segment slopes many functions ``CF(sub_j, u)``
    with ``u = gap / lcm``; adding the top value of ``m`` to their sum
    recovers ``m.function``.
    """
    f = m.function
    G = f.graph
    hi = f.max_value
    segs = m.segments()
    slopes = [int(s) for *_, s in segs]
    big = lcm(*slopes)
    u = m.gap / big
    hi_ivs = m.high.interval_map()
    moves = []
    for j in range(big):
        ivs = {eid: list(lst) for eid, lst in hi_ivs.items()}
        for (eid, x0, x1, s) in segs:
            k = big // int(s)
            a = (j % k) * u
            if a == 0:
                continue
            if f.on_edge(eid, x1) == hi:   # high end at x1, portion grows downward
                ivs.setdefault(eid, []).append((x1 - a, x1))
            else:
                ivs.setdefault(eid, []).append((x0, x0 + a))
        sub = ClosedSubgraph.make(G, m.high.vertices, ivs)
        moves.append(chip_firing_function(G, sub, u))
    return moves


def sum_functions(fs: Iterable[PLFunction], graph: MetricGraph) -> PLFunction:
    acc = PLFunction.constant(graph, 0)
    for g in fs:
        acc = acc + g
    return acc


# -- finite models, reduction, equivalence and rank ------------------------------

class Discretization:
    """Integer-scaled subdivision of ``G`` carrying given points as vertices."""

    def __init__(self, G: MetricGraph, points=(), level: int = 1):
        self.graph = G
        self.scale = integer_scale_factor(G, points)
        self.scaled = scale(G, self.scale)
        self.level = level
        self.model = FiniteModel(subdivide(self.scaled, level))

    def vertex_of(self, p: GraphPoint) -> str:
        return subdivision_vertex(self.scaled, scale_point(p, self.scale), self.level)

    def point_of(self, vid: str) -> GraphPoint:
        p = subdivision_point(self.scaled, vid, self.level)
        return scale_point(p, Fraction(1, self.scale))

    def vector(self, D: Divisor) -> np.ndarray:
        x = np.zeros(self.model.n, dtype=np.int64)
        for p, c in D.items():
            x[self.model.index[self.vertex_of(p)]] += c
        return x

    def divisor(self, x) -> Divisor:
        return Divisor((self.point_of(self.model.vertices[i]), int(c))
                       for i, c in enumerate(x) if c)

    def function(self, values: dict) -> PLFunction:
        """PL function on ``G`` affine on every piece, from values at model vertices."""
        unit = Fraction(1, self.scale * self.level)
        data = {}
        for e in self.graph.edges:
            n = int(e.length * self.scale * self.level)
            names = [e.tail] + [f"{e.id}#{j}" for j in range(1, n)] + [e.head]
            data[e.id] = [(j * unit, values[v]) for j, v in enumerate(names)]
        return PLFunction(self.graph, data)


def q_reduce(G: MetricGraph, D: Divisor, q) -> Divisor:
    """q-reduced divisor equivalent to a vertex-supported ``D`` on a finite model."""
    M = FiniteModel(G)
    q = q.ident if isinstance(q, GraphPoint) else str(q)
    return M.divisor(M.reduce(M.vector(D), M.index[q]))


def is_linearly_equivalent(G: MetricGraph, D1: Divisor, D2: Divisor) -> Optional[PLFunction]:
    """Witness ``f`` with ``D1 + (f) = D2``, or ``None``."""
    if D1.degree != D2.degree:
        return None
    disc = Discretization(G, list(D1.support) + list(D2.support))
    M = disc.model
    z = M.solve_firing(disc.vector(D2) - disc.vector(D1))
    if z is None:
        return None
    unit = Fraction(1, disc.scale)
    f = disc.function({v: -int(z[i]) * unit for i, v in enumerate(M.vertices)})
    return f


def _rank_at(G: MetricGraph, D: Divisor, level: int) -> int:
    disc = Discretization(G, D.support, level)
    probe = set(G.vertices)
    for e in G.edges:
        if e.is_loop:
            probe.add(disc.vertex_of(G.point(e.id, e.length / 2)))
    M = disc.model
    return M.rank(disc.vector(D), sorted(M.index[v] for v in probe))


def rank(G: MetricGraph, D: Divisor) -> int:
    """Baker-Norine rank of ``D`` on the metric graph ``G``.

    Computed on two subdivisions of the integer-scaled graph, testing only
    divisors supported on a loopless model; disagreement raises.
    """
    if D.degree < 0:
        return -1
    loops = any(e.is_loop for e in G.edges)
    k0 = 2 if loops else 1
    r1 = _rank_at(G, D, k0)
    r2 = _rank_at(G, D, 2 * k0)
    if r1 != r2:
        raise RankMismatch(f"rank {r1} at level {k0} but {r2} at level {2 * k0}")
    return r1

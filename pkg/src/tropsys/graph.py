"""Metric graphs with exact rational edge lengths.

A :class:`MetricGraph` is a model of a compact metric graph: a finite
connected multigraph (loops and parallel edges allowed) whose edges carry
positive rational lengths.  Every edge has a fixed orientation, so a point
in the interior of an edge is addressed by ``(edge id, offset from the
tail)``.

Points are :class:`GraphPoint` values.  They are canonical: a point at
offset 0 or at the full edge length is stored as the corresponding vertex,
so structural equality coincides with metric equality.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Iterable, NamedTuple

from .errors import DisconnectedGraph, InvalidInput, NonIntegralLengths, NonpositiveLength


def as_fraction(x) -> Fraction:
    """Parse ints, Fractions and ``"p/q"`` strings exactly."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise InvalidInput(f"not a rational: {x!r}")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except ValueError as exc:
            raise InvalidInput(f"not a rational: {x!r}") from exc
    if isinstance(x, float):
        raise InvalidInput(f"floats are not accepted as exact rationals: {x!r}")
    raise InvalidInput(f"not a rational: {x!r}")


def format_fraction(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True, order=True)
class GraphPoint:
    """A point of a metric graph.

    ``kind`` is ``"v"`` for a vertex (``ident`` is the vertex id) or ``"e"``
    for a point strictly inside an edge (``ident`` is the edge id and
    ``offset`` the distance from the tail).  Build instances through
    :meth:`MetricGraph.point` or :meth:`MetricGraph.vertex_point` so that they
    are canonical.
    """

    kind: str
    ident: str
    offset: Fraction = Fraction(0)

    @property
    def is_vertex(self) -> bool:
        return self.kind == "v"

    def __repr__(self) -> str:
        if self.is_vertex:
            return f"<{self.ident}>"
        return f"<{self.ident}@{self.offset}>"


@dataclass(frozen=True)
class Edge:
    id: str
    tail: str
    head: str
    length: Fraction

    @property
    def is_loop(self) -> bool:
        return self.tail == self.head


class Direction(NamedTuple):
    """A germ of an edge leaving a point.

    ``sign`` is +1 when moving away increases the offset along ``edge``.
    """

    edge: str
    offset: Fraction
    sign: int


class MetricGraph:
    """Finite connected model of a metric graph."""

    def __init__(self, vertices: Iterable, edges: Iterable[Edge]):
        self.vertices: tuple[str, ...] = tuple(str(v) for v in vertices)
        self.edges: tuple[Edge, ...] = tuple(edges)
        if len(set(self.vertices)) != len(self.vertices):
            raise InvalidInput("duplicate vertex ids")
        if not self.vertices:
            raise InvalidInput("graph has no vertices")
        self._edge = {}
        vset = set(self.vertices)
        for e in self.edges:
            if e.id in self._edge:
                raise InvalidInput(f"duplicate edge id {e.id!r}")
            if e.tail not in vset or e.head not in vset:
                raise InvalidInput(f"edge {e.id!r} has an unknown endpoint")
            if e.length <= 0:
                raise NonpositiveLength(f"edge {e.id!r} has length {e.length}")
            self._edge[e.id] = e
        self._incident: dict[str, list[tuple[str, int]]] = {v: [] for v in self.vertices}
        for e in self.edges:
            self._incident[e.tail].append((e.id, 0))
            self._incident[e.head].append((e.id, 1))
        self._check_connected()

    def _check_connected(self) -> None:
        seen = {self.vertices[0]}
        stack = [self.vertices[0]]
        while stack:
            v = stack.pop()
            for eid, _ in self._incident[v]:
                e = self._edge[eid]
                for w in (e.tail, e.head):
                    if w not in seen:
                        seen.add(w)
                        stack.append(w)
        if len(seen) != len(self.vertices):
            raise DisconnectedGraph(
                f"graph has {len(self.vertices) - len(seen)} unreachable vertices")

    # -- basic queries -------------------------------------------------
    def edge(self, eid: str) -> Edge:
        return self._edge[eid]

    def length(self, eid: str) -> Fraction:
        return self._edge[eid].length

    @property
    def edge_ids(self) -> tuple[str, ...]:
        return tuple(e.id for e in self.edges)

    def incident(self, v: str) -> list[tuple[str, int]]:
        """``(edge id, end)`` pairs at ``v``; end 0 is the tail, 1 the head."""
        return self._incident[v]

    def degree(self, v: str) -> int:
        return len(self._incident[v])

    @property
    def genus(self) -> int:
        return len(self.edges) - len(self.vertices) + 1

    @property
    def total_length(self) -> Fraction:
        return sum((e.length for e in self.edges), Fraction(0))

    def __repr__(self) -> str:
        return f"MetricGraph(|V|={len(self.vertices)}, |E|={len(self.edges)})"

    def __eq__(self, other) -> bool:
        return (isinstance(other, MetricGraph) and self.vertices == other.vertices
                and self.edges == other.edges)

    def __hash__(self) -> int:
        return hash((self.vertices, self.edges))

    # -- points ----------------------------------------------------------
    def vertex_point(self, v) -> GraphPoint:
        v = str(v)
        if v not in self._incident:
            raise InvalidInput(f"unknown vertex {v!r}")
        return GraphPoint("v", v)

    def point(self, eid, offset) -> GraphPoint:
        eid = str(eid)
        if eid not in self._edge:
            raise InvalidInput(f"unknown edge {eid!r}")
        e = self._edge[eid]
        t = as_fraction(offset)
        if t < 0 or t > e.length:
            raise InvalidInput(f"offset {t} outside edge {eid!r} of length {e.length}")
        if t == 0:
            return GraphPoint("v", e.tail)
        if t == e.length:
            return GraphPoint("v", e.head)
        return GraphPoint("e", eid, t)

    def valence(self, p: GraphPoint) -> int:
        return self.degree(p.ident) if p.is_vertex else 2

    def directions(self, p: GraphPoint) -> list[Direction]:
        """Outgoing edge germs at ``p`` (a loop contributes two)."""
        if p.is_vertex:
            out = []
            for eid, end in self._incident[p.ident]:
                if end == 0:
                    out.append(Direction(eid, Fraction(0), 1))
                else:
                    out.append(Direction(eid, self._edge[eid].length, -1))
            return out
        return [Direction(p.ident, p.offset, 1), Direction(p.ident, p.offset, -1)]

    def positions(self, p: GraphPoint) -> list[tuple[str, Fraction]]:
        """All ``(edge, offset)`` addresses of ``p``, endpoints included."""
        if p.is_vertex:
            return [(d.edge, d.offset) for d in self.directions(p)]
        return [(p.ident, p.offset)]

    def smooth(self, p: GraphPoint) -> bool:
        return self.valence(p) == 2

    # -- distances ---------------------------------------------------------
    def vertex_distances(self, sources: dict[str, Fraction]) -> dict[str, Fraction]:
        """Multi-source Dijkstra over vertices with initial distances."""
        dist = dict(sources)
        heap = [(d, v) for v, d in dist.items()]
        heapq.heapify(heap)
        done = set()
        while heap:
            d, v = heapq.heappop(heap)
            if v in done:
                continue
            done.add(v)
            for eid, end in self._incident[v]:
                e = self._edge[eid]
                w = e.head if end == 0 else e.tail
                nd = d + e.length
                if w not in dist or nd < dist[w]:
                    dist[w] = nd
                    heapq.heappush(heap, (nd, w))
        return dist


def build_graph(spec) -> MetricGraph:
    """Build a graph from the JSON-shaped description.

    ``spec`` is ``{"vertices": [...], "edges": [{"id", "ends": [a, b],
    "length": "p/q"}, ...]}``.  Edge ids default to their list position.
    """
    try:
        vertices = [str(v) for v in spec["vertices"]]
        edges = []
        for i, item in enumerate(spec.get("edges", [])):
            a, b = item["ends"]
            edges.append(Edge(str(item.get("id", i)), str(a), str(b),
                              as_fraction(item.get("length", 1))))
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, InvalidInput):
            raise
        raise InvalidInput(f"malformed graph description: {exc}") from exc
    return MetricGraph(vertices, edges)


def graph_from_edges(edge_list, lengths=None) -> MetricGraph:
    """Convenience constructor from ``[(a, b), ...]`` with optional lengths."""
    verts: list[str] = []
    edges = []
    for i, (a, b) in enumerate(edge_list):
        for v in (str(a), str(b)):
            if v not in verts:
                verts.append(v)
        length = as_fraction(lengths[i]) if lengths is not None else Fraction(1)
        edges.append(Edge(f"e{i}", str(a), str(b), length))
    return MetricGraph(verts, edges)


# -- models ---------------------------------------------------------------

class CoarsestModel(NamedTuple):
    graph: MetricGraph
    unique: bool


def coarsest_model(G: MetricGraph) -> CoarsestModel:
    """Suppress all 2-valent vertices.

    A metric circle has no point of valence other than 2; it is then
    modelled by a single loop at the lexicographically least vertex and the
    result is flagged as not unique.
    """
    keep = [v for v in G.vertices if G.degree(v) != 2]
    unique = True
    if not keep:
        keep = [min(G.vertices)]
        unique = False
    keep_set = set(keep)
    used: set[str] = set()
    new_edges = []
    for v in keep:
        for eid, end in G.incident(v):
            if eid in used:
                continue
            chain = []
            length = Fraction(0)
            cur_e, cur_end = eid, end
            while True:
                e = G.edge(cur_e)
                used.add(cur_e)
                chain.append(cur_e)
                length += e.length
                w = e.head if cur_end == 0 else e.tail
                if w in keep_set:
                    break
                # w is 2-valent: continue through the other incident germ
                nxt = [(x, xe) for x, xe in G.incident(w) if not (x == cur_e and xe != cur_end)]
                cur_e, cur_end = nxt[0]
            new_edges.append(Edge(chain[0] if len(chain) == 1 else "+".join(chain),
                                  v, w, length))
    return CoarsestModel(MetricGraph(keep, new_edges), unique)


def scale(G: MetricGraph, factor) -> MetricGraph:
    factor = as_fraction(factor)
    return MetricGraph(G.vertices, [Edge(e.id, e.tail, e.head, e.length * factor)
                                    for e in G.edges])


def integer_scale_factor(G: MetricGraph, points: Iterable[GraphPoint] = ()) -> int:
    """Least positive integer making all lengths and given offsets integral."""
    den = 1
    for e in G.edges:
        den = lcm(den, e.length.denominator)
    for p in points:
        den = lcm(den, p.offset.denominator)
    return den


def scale_point(p: GraphPoint, factor) -> GraphPoint:
    if p.is_vertex:
        return p
    return GraphPoint("e", p.ident, p.offset * factor)


def subdivision_vertex(G: MetricGraph, p: GraphPoint, k: int) -> str:
    """Id of the vertex of ``subdivide(G, k)`` located at ``p``."""
    if p.is_vertex:
        return p.ident
    j = p.offset * k
    if j.denominator != 1:
        raise NonIntegralLengths(f"{p!r} is not a vertex of the level-{k} subdivision")
    return f"{p.ident}#{j.numerator}"


def subdivision_point(G: MetricGraph, vid: str, k: int) -> GraphPoint:
    """Inverse of :func:`subdivision_vertex`."""
    if "#" not in vid:
        return G.vertex_point(vid)
    eid, j = vid.rsplit("#", 1)
    return G.point(eid, Fraction(int(j), k))


def subdivide(G: MetricGraph, k: int) -> MetricGraph:
    """Model in which every edge has length ``1/k``.

    All edge lengths of ``G`` must be integers.  Original vertex ids are
    kept; the point at offset ``j/k`` of edge ``e`` becomes vertex ``e#j``.
    """
    if k < 1:
        raise InvalidInput("subdivision level must be positive")
    verts = list(G.vertices)
    edges = []
    step = Fraction(1, k)
    for e in G.edges:
        if e.length.denominator != 1:
            raise NonIntegralLengths(f"edge {e.id!r} has length {e.length}")
        n = e.length.numerator * k
        names = [e.tail] + [f"{e.id}#{j}" for j in range(1, n)] + [e.head]
        verts.extend(names[1:-1])
        for j in range(n):
            eid = e.id if n == 1 else f"{e.id}#{j}"
            edges.append(Edge(eid, names[j], names[j + 1], step))
    return MetricGraph(verts, edges)


def refine(G: MetricGraph, points: Iterable[GraphPoint]) -> tuple[MetricGraph, dict]:
    """Insert the given interior points as 2-valent vertices.

    Returns the refined graph and a map sending every inserted point to its
    new vertex id.  Pieces of edge ``e`` are named ``e|0``, ``e|1``, ...
    """
    cuts: dict[str, list[Fraction]] = {}
    for p in points:
        if not p.is_vertex:
            cuts.setdefault(p.ident, []).append(p.offset)
    verts = list(G.vertices)
    edges = []
    names = {}
    for e in G.edges:
        offs = sorted(set(cuts.get(e.id, [])))
        if not offs:
            edges.append(e)
            continue
        chain = [e.tail]
        for t in offs:
            vid = f"{e.id}@{t}"
            names[GraphPoint("e", e.id, t)] = vid
            verts.append(vid)
            chain.append(vid)
        chain.append(e.head)
        bounds = [Fraction(0)] + offs + [e.length]
        for j in range(len(chain) - 1):
            edges.append(Edge(f"{e.id}|{j}", chain[j], chain[j + 1], bounds[j + 1] - bounds[j]))
    return MetricGraph(verts, edges), names


# -- closed subgraphs -------------------------------------------------------

def _merge_intervals(ivs):
    ivs = sorted(ivs)
    out = []
    for a, b in ivs:
        if out and a <= out[-1][1]:
            if b > out[-1][1]:
                out[-1] = (out[-1][0], b)
        else:
            out.append((a, b))
    return tuple(out)


@dataclass(frozen=True)
class ClosedSubgraph:
    """Closed subset of a metric graph with finitely many components.

    Stored as a set of vertices plus, per edge, sorted disjoint maximal
    closed intervals of offsets.  Vertex membership and interval endpoints
    at 0 or the edge length are kept consistent by :meth:`make`.
    """

    vertices: frozenset
    intervals: tuple = field(default=())  # ((edge id, ((a, b), ...)), ...)

    @classmethod
    def make(cls, G: MetricGraph, vertices=(), intervals=None) -> "ClosedSubgraph":
        verts = set(str(v) for v in vertices)
        ivs: dict[str, list] = {}
        for eid, lst in (intervals or {}).items():
            L = G.length(eid)
            for a, b in lst:
                a, b = as_fraction(a), as_fraction(b)
                if not (0 <= a <= b <= L):
                    raise InvalidInput(f"bad interval [{a}, {b}] on edge {eid!r}")
                ivs.setdefault(eid, []).append((a, b))
        changed = True
        while changed:
            changed = False
            for v in list(verts):
                for eid, end in G.incident(v):
                    pt = Fraction(0) if end == 0 else G.length(eid)
                    lst = ivs.setdefault(eid, [])
                    if not any(a <= pt <= b for a, b in lst):
                        lst.append((pt, pt))
            for eid, lst in ivs.items():
                e = G.edge(eid)
                for a, b in lst:
                    if a == 0 and e.tail not in verts:
                        verts.add(e.tail)
                        changed = True
                    if b == e.length and e.head not in verts:
                        verts.add(e.head)
                        changed = True
        items = tuple(sorted((eid, _merge_intervals(lst)) for eid, lst in ivs.items() if lst))
        return cls(frozenset(verts), items)

    @classmethod
    def from_subcomplex(cls, G: MetricGraph, vertices, edges) -> "ClosedSubgraph":
        return cls.make(G, vertices, {e: [(0, G.length(e))] for e in edges})

    @classmethod
    def from_points(cls, G: MetricGraph, points) -> "ClosedSubgraph":
        verts = [p.ident for p in points if p.is_vertex]
        ivs: dict = {}
        for p in points:
            if not p.is_vertex:
                ivs.setdefault(p.ident, []).append((p.offset, p.offset))
        return cls.make(G, verts, ivs)

    def interval_map(self) -> dict:
        return dict(self.intervals)

    def is_empty(self) -> bool:
        return not self.vertices and not self.intervals

    def contains(self, G: MetricGraph, p: GraphPoint) -> bool:
        if p.is_vertex:
            return p.ident in self.vertices
        return any(a <= p.offset <= b for a, b in self.interval_map().get(p.ident, ()))

    def is_whole(self, G: MetricGraph) -> bool:
        ivm = self.interval_map()
        return all(ivm.get(e.id) == ((Fraction(0), e.length),) for e in G.edges) and \
            len(self.vertices) == len(G.vertices)

    def measure(self) -> Fraction:
        return sum((b - a for _, lst in self.intervals for a, b in lst), Fraction(0))

    def boundary_directions(self, G: MetricGraph) -> dict[GraphPoint, list[Direction]]:
        """Outgoing germs at boundary points (germs leaving the subgraph)."""
        out: dict[GraphPoint, list[Direction]] = {}
        ivm = self.interval_map()
        for eid, lst in ivm.items():
            L = G.length(eid)
            for a, b in lst:
                if a > 0:
                    out.setdefault(G.point(eid, a), []).append(Direction(eid, a, -1))
                if b < L:
                    out.setdefault(G.point(eid, b), []).append(Direction(eid, b, 1))
        return out

    def boundary(self, G: MetricGraph) -> list[GraphPoint]:
        return sorted(self.boundary_directions(G))

    def union(self, G: MetricGraph, other: "ClosedSubgraph") -> "ClosedSubgraph":
        ivs: dict = {}
        for src in (self.interval_map(), other.interval_map()):
            for eid, lst in src.items():
                ivs.setdefault(eid, []).extend(lst)
        return ClosedSubgraph.make(G, self.vertices | other.vertices, ivs)


def components_minus(G: MetricGraph, A: Iterable[GraphPoint]) -> list[ClosedSubgraph]:
    """Closures of the connected components of ``G`` minus finitely many points."""
    A = set(A)
    cut_vertices = {p.ident for p in A if p.is_vertex}
    cuts: dict[str, list[Fraction]] = {}
    for p in A:
        if not p.is_vertex:
            cuts.setdefault(p.ident, []).append(p.offset)
    parent: dict = {}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[rx] = ry

    pieces: dict = {}
    for v in G.vertices:
        if v not in cut_vertices:
            parent[("v", v)] = ("v", v)
    for e in G.edges:
        bounds = [Fraction(0)] + sorted(set(cuts.get(e.id, []))) + [e.length]
        for j in range(len(bounds) - 1):
            key = ("p", e.id, j)
            parent[key] = key
            pieces[key] = (e.id, bounds[j], bounds[j + 1])
            if j == 0 and e.tail not in cut_vertices:
                union(key, ("v", e.tail))
            if j == len(bounds) - 2 and e.head not in cut_vertices:
                union(key, ("v", e.head))
    groups: dict = {}
    for key in parent:
        groups.setdefault(find(key), []).append(key)
    comps = []
    for members in groups.values():
        verts = [m[1] for m in members if m[0] == "v"]
        ivs: dict = {}
        for m in members:
            if m[0] == "p":
                eid, a, b = pieces[m]
                ivs.setdefault(eid, []).append((a, b))
        comps.append(ClosedSubgraph.make(G, verts, ivs))
    comps.sort(key=lambda c: (sorted(c.vertices), c.intervals))
    return comps


def count_components_minus(G: MetricGraph, A: Iterable[GraphPoint]) -> int:
    """Number of components of ``G`` minus ``A`` (fast path, no closures)."""
    A = set(A)
    cut_vertices = {p.ident for p in A if p.is_vertex}
    cuts: dict[str, set] = {}
    for p in A:
        if not p.is_vertex:
            cuts.setdefault(p.ident, set()).add(p.offset)
    parent = {v: v for v in G.vertices if v not in cut_vertices}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    count = len(parent)
    for e in G.edges:
        r = len(cuts.get(e.id, ()))
        t_ok = e.tail not in cut_vertices
        h_ok = e.head not in cut_vertices
        if r == 0:
            if t_ok and h_ok:
                a, b = find(e.tail), find(e.head)
                if a != b:
                    parent[a] = b
                    count -= 1
            elif not t_ok and not h_ok:
                count += 1  # open edge between two removed vertices
            continue
        count += r - 1
        if not t_ok:
            count += 1
        if not h_ok:
            count += 1
    return count


def is_smooth_cut_set(G: MetricGraph, A: Iterable[GraphPoint]) -> bool:
    A = list(A)
    if not A or any(not G.smooth(p) for p in A):
        return False
    return count_components_minus(G, A) > 1

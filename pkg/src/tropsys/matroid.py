"""Cographic matroids of graph models and their Bergman complexes."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .graph import MetricGraph
from .linear_system import SimplicialComplex, order_complex


def _components(vertices, edges) -> int:
    parent = {v: v for v in vertices}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    count = len(parent)
    for a, b in edges:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
            count -= 1
    return count


class CographicMatroid:
    """Matroid on the edges of ``G`` whose dependent sets contain edge cuts."""

    def __init__(self, G: MetricGraph):
        self.graph = G
        self.ground = frozenset(G.edge_ids)
        self._ends = {e.id: (e.tail, e.head) for e in G.edges}

    def rank(self, A) -> int:
        A = frozenset(A)
        rest = [self._ends[e] for e in self.ground - A]
        return len(A) - _components(self.graph.vertices, rest) + 1

    @property
    def full_rank(self) -> int:
        return self.rank(self.ground)

    def closure(self, A) -> frozenset:
        A = frozenset(A)
        r = self.rank(A)
        return frozenset(e for e in self.ground if e in A or self.rank(A | {e}) == r)

    def is_flat(self, A) -> bool:
        return self.closure(A) == frozenset(A)

    def graph_circuits(self) -> list:
        """Cycles of the graph (cocircuits of the matroid); loops included."""
        out = []
        ids = sorted(self.ground)
        for r in range(1, len(ids) + 1):
            for S in itertools.combinations(ids, r):
                deg: dict = {}
                for e in S:
                    a, b = self._ends[e]
                    deg[a] = deg.get(a, 0) + 1
                    deg[b] = deg.get(b, 0) + 1
                if any(d != 2 for d in deg.values()):
                    continue
                if _components(deg, [self._ends[e] for e in S]) == 1:
                    out.append(frozenset(S))
        return out

    def circuits(self) -> list:
        """Minimal edge cuts of the graph."""
        out = []
        ids = sorted(self.ground)
        base = _components(self.graph.vertices, self._ends.values())
        for r in range(1, len(ids) + 1):
            for S in itertools.combinations(ids, r):
                S = frozenset(S)
                if any(c <= S for c in out):
                    continue
                rest = [self._ends[e] for e in self.ground - S]
                if _components(self.graph.vertices, rest) > base:
                    out.append(S)
        return out

    def unions_of_graph_circuits(self) -> list:
        circ = self.graph_circuits()
        seen = {frozenset()}
        frontier = [frozenset()]
        while frontier:
            nxt = []
            for U in frontier:
                for c in circ:
                    V = U | c
                    if V not in seen:
                        seen.add(V)
                        nxt.append(V)
            frontier = nxt
        return sorted(seen, key=lambda s: (len(s), sorted(s)))


@dataclass
class FlatLattice:
    flats: list
    bottom: frozenset
    top: frozenset

    def proper_part(self) -> list:
        return [F for F in self.flats if F != self.bottom and F != self.top]

    def covers(self) -> list:
        out = []
        for i, A in enumerate(self.flats):
            for j, B in enumerate(self.flats):
                if A < B and not any(A < C < B for C in self.flats):
                    out.append((i, j))
        return out


def cographic_matroid(G: MetricGraph) -> CographicMatroid:
    return CographicMatroid(G)


def lattice_of_flats(M: CographicMatroid) -> FlatLattice:
    """Flats as complements of unions of graph circuits."""
    flats = sorted({M.ground - U for U in M.unions_of_graph_circuits()},
                   key=lambda s: (len(s), sorted(s)))
    return FlatLattice(flats, flats[0], M.ground)


def bergman_complex(M: CographicMatroid) -> SimplicialComplex:
    """Order complex of the proper part of the lattice of flats."""
    proper = lattice_of_flats(M).proper_part()
    return order_complex(proper, lambda a, b: a < b)


def _element_edges(G: MetricGraph, elem) -> frozenset:
    ivm = elem.subgraph.interval_map()
    return frozenset(e.id for e in G.edges if ivm.get(e.id) == ((Fraction(0), e.length),))


def link_contains_bergman(G: MetricGraph, link: SimplicialComplex, berg: SimplicialComplex) -> dict:
    """Realize ``berg`` inside ``link`` by matching flats with circuit unions.

    A flat ``F`` goes to the firing poset element whose subgraph is spanned
    by the complementary edges and whose germ weights are all 1.  Returns a
    certificate with the vertex map, the link vertices left over and, if
    the map is not simplicial, a failing simplex.
    """
    ground = frozenset(G.edge_ids)
    index = {}
    for i, elem in enumerate(link.vertices):
        if all(c == 1 for *_, c in elem.germs):
            index[_element_edges(G, elem)] = i
    vmap = {}
    for j, F in enumerate(berg.vertices):
        U = ground - F
        if U not in index:
            return {"contained": False, "counterexample": (j,), "map": vmap}
        vmap[j] = index[U]
    if len(set(vmap.values())) != len(vmap):
        return {"contained": False, "counterexample": None, "map": vmap}
    lset = set(link.simplices)
    for s in berg.simplices:
        img = tuple(sorted(vmap[i] for i in s))
        if img not in lset:
            return {"contained": False, "counterexample": s, "map": vmap}
    extra = sorted(set(range(len(link.vertices))) - set(vmap.values()))
    equal = not extra and len(lset) == len(berg.simplices)
    return {"contained": True, "equal": equal, "map": vmap, "extra": extra,
            "counterexample": None}

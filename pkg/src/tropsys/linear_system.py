"""The linear system |D|: generators, extremals, cells, firing posets and links.

Cells of |D| are discovered by a breadth-first search over two-level moves.
A state is an effective divisor ``P`` in |D| together with the starting
slope, on every piece of the model refined by ``supp(D)``, of the function
``f`` with ``D + (f) = P``.  The slope sequences of ``f`` on the pieces
identify the open cell containing ``P``.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .divisors import Discretization, WeightedChipFiringMove, is_linearly_equivalent, level_set
from .errors import InvalidInput, NotAVertex, NotEquivalent, NotInSpan, TooLarge
from .functions import Divisor, PLFunction, tropical_sum
from .graph import ClosedSubgraph, GraphPoint, MetricGraph, count_components_minus


# -- small containers -----------------------------------------------------------

@dataclass
class GeneratorSet:
    """Functions of R(D) normalized mod constants, with their divisors."""

    functions: list
    divisors: list
    extremal: list

    def __len__(self) -> int:
        return len(self.functions)

    def extremal_subset(self) -> "GeneratorSet":
        idx = [i for i, x in enumerate(self.extremal) if x]
        return GeneratorSet([self.functions[i] for i in idx], [self.divisors[i] for i in idx],
                            [True] * len(idx))


@dataclass
class CellRecord:
    """One open cell of |D|.

    ``slopes`` holds, per piece of the model refined by ``supp(D)``, the
    slope sequence of the defining function; the remaining discrete data
    (vertex chips ``d_v``, per-piece compositions, starting slopes) are
    derived from it.
    """

    index: int
    key: tuple
    dimension: int
    divisor: Divisor
    d_v: dict
    compositions: dict
    start_slopes: dict
    faces: list = field(default_factory=list)
    vertices: list = field(default_factory=list)

    @property
    def slopes(self):
        return self.key


@dataclass
class CellComplexRecord:
    pieces: list
    cells: list

    @property
    def f_vector(self) -> list:
        if not self.cells:
            return []
        top = max(c.dimension for c in self.cells)
        out = [0] * (top + 1)
        for c in self.cells:
            out[c.dimension] += 1
        return out

    def of_dimension(self, d: int) -> list:
        return [c for c in self.cells if c.dimension == d]

    def maximal_cells(self) -> list:
        covered = set()
        for c in self.cells:
            covered.update(c.faces)
        return [c for c in self.cells if c.index not in covered]

    def euler_characteristic(self) -> int:
        return sum((-1) ** c.dimension for c in self.cells)


@dataclass(frozen=True)
class FiringPosetElement:
    subgraph: ClosedSubgraph
    germs: tuple   # ((point, edge, sign, c), ...)

    def germ_map(self) -> dict:
        return {(p, e, s): c for p, e, s, c in self.germs}


class SimplicialComplex:
    """Abstract simplicial complex closed under taking faces."""

    def __init__(self, vertices, simplices):
        self.vertices = list(vertices)
        faces = set()
        for s in simplices:
            s = tuple(sorted(s))
            for k in range(1, len(s) + 1):
                faces.update(itertools.combinations(s, k))
        self.simplices = sorted(faces, key=lambda s: (len(s), s))

    @property
    def dimension(self) -> int:
        return max((len(s) - 1 for s in self.simplices), default=-1)

    def facets(self) -> list:
        sset = set(self.simplices)
        out = []
        for s in self.simplices:
            if not any(len(t) == len(s) + 1 and set(s) <= set(t) for t in sset):
                out.append(s)
        return out

    def is_pure(self) -> bool:
        return len({len(s) for s in self.facets()}) <= 1

    def f_vector(self) -> list:
        out = [0] * (self.dimension + 1)
        for s in self.simplices:
            out[len(s) - 1] += 1
        return out

    def one_skeleton(self):
        import networkx as nx
        g = nx.Graph()
        g.add_nodes_from(range(len(self.vertices)))
        g.add_edges_from(s for s in self.simplices if len(s) == 2)
        return g

    def __len__(self) -> int:
        return len(self.simplices)


def order_complex(elements, less) -> SimplicialComplex:
    """Chains of a finite poset given by a strict order predicate."""
    n = len(elements)
    up = {i: [j for j in range(n) if less(elements[i], elements[j])] for i in range(n)}
    chains = []

    def extend(chain):
        chains.append(tuple(chain))
        for j in up[chain[-1]]:
            extend(chain + [j])

    for i in range(n):
        extend([i])
    return SimplicialComplex(elements, chains)


# -- the move engine ----------------------------------------------------------------

class _Refinement:
    """Model refined by a finite point set: nodes and sub-edges."""

    def __init__(self, G: MetricGraph, points):
        self.G = G
        cuts: dict = {}
        for p in points:
            if not p.is_vertex:
                cuts.setdefault(p.ident, set()).add(p.offset)
        self.subedges = []     # (edge, a, b, tail point, head point)
        self.by_edge: dict = {}
        for e in G.edges:
            offs = [Fraction(0)] + sorted(cuts.get(e.id, ())) + [e.length]
            lst = []
            for a, b in zip(offs, offs[1:]):
                lst.append(len(self.subedges))
                self.subedges.append((e.id, a, b, G.point(e.id, a), G.point(e.id, b)))
            self.by_edge[e.id] = lst
        self.incident: dict = {}
        for i, (_, _, _, t, h) in enumerate(self.subedges):
            self.incident.setdefault(t, []).append((i, 0))
            self.incident.setdefault(h, []).append((i, 1))


class LinearSystem:
    """Move engine for |D| on a fixed model ``G``.

    Parameters
    ----------
    G : MetricGraph
        The model; cells are indexed relative to it refined by ``supp(D)``.
    D : Divisor
    slope_bound : int, optional
        Upper bound on the slope of a single move germ (``None`` means the
        chip count is the only bound).
    cap : int
        Maximum number of cells before :class:`TooLarge` is raised.
    """

    def __init__(self, G: MetricGraph, D: Divisor, slope_bound: Optional[int] = None,
                 cap: int = 100000):
        self.G = G
        self.D = D
        self.slope_bound = slope_bound
        self.cap = cap
        self.base = _Refinement(G, D.support)
        self.pieces = [(s[0], s[1], s[2]) for s in self.base.subedges]
        self.nodes = set(self.base.incident)
        self.D0, self.f0 = self._effective_representative()
        self._cells = None

    # -- setup -------------------------------------------------------------
    def _effective_representative(self):
        disc = Discretization(self.G, self.D.support)
        M = disc.model
        q = 0
        red = M.reduce(disc.vector(self.D), q)
        if red[q] < 0:
            return None, None
        D0 = disc.divisor(red)
        return D0, is_linearly_equivalent(self.G, self.D, D0)

    @property
    def is_empty(self) -> bool:
        return self.D0 is None

    def state_of(self, f: PLFunction):
        P = self.D + f.principal_divisor()
        m = tuple(f.outgoing_slope(e, a, 1) for e, a, _ in self.pieces)
        return P, m

    # -- keys and data -------------------------------------------------------
    def _piece_chips(self, P: Divisor):
        out = [[] for _ in self.pieces]
        for p, c in P.items():
            if p.is_vertex:
                continue
            for i in self.base.by_edge[p.ident]:
                _, a, b = self.pieces[i]
                if a < p.offset < b:
                    out[i].append((p.offset, c))
                    break
        return [sorted(x) for x in out]

    def key(self, P: Divisor, m) -> tuple:
        chips = self._piece_chips(P)
        key = []
        for i, s in enumerate(m):
            seq = [int(s)]
            for _, c in chips[i]:
                seq.append(seq[-1] + c)
            key.append(tuple(seq))
        return tuple(key)

    def interior_support(self, P: Divisor) -> list:
        return [p for p in P.support if p not in self.nodes]

    def dimension(self, P: Divisor) -> int:
        return count_components_minus(self.G, self.interior_support(P)) - 1

    def function(self, P: Divisor, m) -> PLFunction:
        """The function ``f`` with ``D + (f) = P`` and given starting slopes, normalized."""
        chips = self._piece_chips(P)
        prof = {}
        for e in self.G.edges:
            pts = [(Fraction(0), Fraction(0))]
            for i in self.base.by_edge[e.id]:
                _, a, b = self.pieces[i]
                s = Fraction(m[i])
                x, y = a, pts[-1][1]
                for t, c in chips[i]:
                    y += s * (t - x)
                    pts.append((t, y))
                    x = t
                    s += c
                y += s * (b - x)
                pts.append((b, y))
            prof[e.id] = pts
        vals = {min(self.G.vertices): Fraction(0)}
        stack = [min(self.G.vertices)]
        while stack:
            v = stack.pop()
            for eid, end in self.G.incident(v):
                e = self.G.edge(eid)
                delta = prof[eid][-1][1]
                w, val = (e.head, vals[v] + delta) if end == 0 else (e.tail, vals[v] - delta)
                if w not in vals:
                    vals[w] = val
                    stack.append(w)
        data = {e.id: [(t, vals[e.tail] + y) for t, y in prof[e.id]] for e in self.G.edges}
        return PLFunction(self.G, data)

    # -- moves -------------------------------------------------------------------
    def _subgraph_choices(self, R: _Refinement, P: Divisor):
        """Closed subcomplexes of ``R`` whose boundary lies in ``supp(P)``."""
        supp = set(P.support)
        parent = list(range(len(R.subedges)))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for node, inc in R.incident.items():
            if node in supp:
                continue
            for (i, _), (j, _) in zip(inc, inc[1:]):
                a, b = find(i), find(j)
                if a != b:
                    parent[a] = b
        groups: dict = {}
        for i in range(len(R.subedges)):
            groups.setdefault(find(i), set()).add(i)
        comps = list(groups.values())
        pts = sorted(p for p in supp if P[p] >= self.G.valence(p))
        for mask in range(1 << len(comps)):
            E1 = set()
            for k in range(len(comps)):
                if mask >> k & 1:
                    E1 |= comps[k]
            if len(E1) == len(R.subedges):
                continue
            N1 = set()
            for i in E1:
                N1.add(R.subedges[i][3])
                N1.add(R.subedges[i][4])
            free = [p for p in pts if p not in N1]
            for r in range(len(free) + 1):
                for extra in itertools.combinations(free, r):
                    if not E1 and not extra:
                        continue
                    yield frozenset(E1), N1 | set(extra)

    def _germs(self, R: _Refinement, E1, N1):
        germs: dict = {}
        for i, (_, _, _, t, h) in enumerate(R.subedges):
            if i in E1:
                continue
            if t in N1:
                germs.setdefault(t, []).append((i, 0))
            if h in N1:
                germs.setdefault(h, []).append((i, 1))
        return germs

    def _compositions(self, k: int, total: int):
        hi = total if self.slope_bound is None else min(total, self.slope_bound)
        for c in itertools.product(range(1, hi + 1), repeat=k):
            if sum(c) <= total:
                yield c

    def moves(self, P: Divisor):
        """Legal two-level moves from ``P`` as ``(R, E1, N1, {germ: c})``."""
        R = _Refinement(self.G, set(P.support) | self.nodes)
        for E1, N1 in self._subgraph_choices(R, P):
            germs = self._germs(R, E1, N1)
            if not germs or any(len(g) > P[x] for x, g in germs.items()):
                continue
            nodes = sorted(germs)
            options = [list(self._compositions(len(germs[x]), P[x])) for x in nodes]
            for combo in itertools.product(*options):
                cmap = {}
                for x, cs in zip(nodes, combo):
                    for g, c in zip(germs[x], cs):
                        cmap[g] = c
                yield R, E1, N1, cmap

    @staticmethod
    def event(R: _Refinement, cmap) -> Fraction:
        best = None
        for i, (_, a, b, _, _) in enumerate(R.subedges):
            c0, c1 = cmap.get((i, 0)), cmap.get((i, 1))
            if c0 is None and c1 is None:
                continue
            L = b - a
            if c0 is not None and c1 is not None:
                lam = L / (Fraction(1, c0) + Fraction(1, c1))
            else:
                lam = L * (c0 if c0 is not None else c1)
            if best is None or lam < best:
                best = lam
        return best

    def apply(self, P: Divisor, m, R: _Refinement, E1, cmap, lam: Fraction):
        """State after running the move for ``lam`` (at most the event)."""
        G = self.G
        delta: dict = {}
        for (i, end), c in cmap.items():
            x = R.subedges[i][3 + end]
            delta[x] = delta.get(x, 0) - c
        for i, (eid, a, b, _, _) in enumerate(R.subedges):
            c0, c1 = cmap.get((i, 0)), cmap.get((i, 1))
            if c0 is None and c1 is None:
                continue
            if c0 is not None and c1 is not None:
                meet = (b - a) / (Fraction(1, c0) + Fraction(1, c1))
                if lam >= meet:
                    p = G.point(eid, a + meet / c0)
                    delta[p] = delta.get(p, 0) + c0 + c1
                    continue
            if c0 is not None:
                p = G.point(eid, a + lam / c0)
                delta[p] = delta.get(p, 0) + c0
            if c1 is not None:
                p = G.point(eid, b - lam / c1)
                delta[p] = delta.get(p, 0) + c1
        newP = P + Divisor(delta)
        start = {}
        for i, (eid, a, b, _, _) in enumerate(R.subedges):
            start[(eid, a)] = i
        newm = []
        for j, (eid, a, b) in enumerate(self.pieces):
            i = start[(eid, a)]
            s = 0
            if i not in E1:
                c0, c1 = cmap.get((i, 0)), cmap.get((i, 1))
                L = R.subedges[i][2] - R.subedges[i][1]
                if c0 is not None:
                    s = -c0
                elif c1 is not None and lam >= c1 * L:
                    s = c1
            newm.append(m[j] + s)
        return newP, tuple(newm)

    def move_function(self, R: _Refinement, E1, cmap, lam: Fraction) -> PLFunction:
        """The two-level function ``g`` of a move run for distance ``lam``."""
        data = {}
        for e in self.G.edges:
            pts = {}
            for i in R.by_edge[e.id]:
                _, a, b, _, _ = R.subedges[i]
                if i in E1:
                    pts[a] = pts[b] = Fraction(0)
                    continue
                c0, c1 = cmap.get((i, 0)), cmap.get((i, 1))

                def val(t, a=a, b=b, c0=c0, c1=c1):
                    v = -lam
                    if c0 is not None:
                        v = max(v, -c0 * (t - a))
                    if c1 is not None:
                        v = max(v, -c1 * (b - t))
                    return v

                cand = {a, b}
                if c0 is not None:
                    cand.add(a + lam / c0)
                if c1 is not None:
                    cand.add(b - lam / c1)
                if c0 is not None and c1 is not None:
                    cand.add((c0 * a + c1 * b) / (c0 + c1))
                for t in cand:
                    if a <= t <= b:
                        pts[t] = val(t)
            data[e.id] = sorted(pts.items())
        return PLFunction(self.G, data)

    # -- descent and enumeration ---------------------------------------------------
    def descend(self, P: Divisor, m):
        """Walk from ``P`` down to a 0-cell by pushing boundary chips outward."""
        for _ in range(10 * (P.degree + 1) * (len(self.pieces) + 1) + 10):
            I = self.interior_support(P)
            if count_components_minus(self.G, I) <= 1:
                return P, m
            R = _Refinement(self.G, set(P.support) | self.nodes)
            Iset = set(I)
            parent = list(range(len(R.subedges)))

            def find(x):
                while parent[x] != x:
                    parent[x] = parent[parent[x]]
                    x = parent[x]
                return x

            for node, inc in R.incident.items():
                if node in Iset:
                    continue
                for (i, _), (j, _) in zip(inc, inc[1:]):
                    parent[find(i)] = find(j)
            E1 = {i for i in range(len(R.subedges)) if find(i) == find(0)}
            N1 = set()
            for i in E1:
                N1.add(R.subedges[i][3])
                N1.add(R.subedges[i][4])
            germs = self._germs(R, E1, N1)
            cmap = {}
            for x, gs in germs.items():
                for g in gs:
                    cmap[g] = P[x] // len(gs)
            lam = self.event(R, cmap)
            P, m = self.apply(P, m, R, E1, cmap, lam)
        raise RuntimeError("descent to a 0-cell did not terminate")

    def cells(self) -> CellComplexRecord:
        if self._cells is not None:
            return self._cells
        if self.is_empty:
            self._cells = CellComplexRecord(self.pieces, [])
            return self._cells
        start = self.descend(*self.state_of(self.f0))
        found = {self.key(*start): start}
        queue = [start]
        while queue:
            P, m = queue.pop(0)
            for R, E1, N1, cmap in self.moves(P):
                lam = self.event(R, cmap)
                for t in (lam / 2, lam):
                    Q = self.apply(P, m, R, E1, cmap, t)
                    k = self.key(*Q)
                    if k not in found:
                        found[k] = Q
                        queue.append(Q)
                        if len(found) > self.cap:
                            raise TooLarge(f"more than {self.cap} cells")
        self._cells = self._assemble(found)
        return self._cells

    def _assemble(self, found) -> CellComplexRecord:
        items = sorted(found.items(), key=lambda kv: (self.dimension(kv[1][0]), kv[0]))
        cells = []
        for idx, (key, (P, m)) in enumerate(items):
            chips = self._piece_chips(P)
            comps = {self.pieces[i]: tuple(c for _, c in chips[i]) for i in range(len(self.pieces))}
            starts = {self.pieces[i]: int(m[i]) for i in range(len(self.pieces))}
            d_v = {x: P[x] for x in sorted(self.nodes)}
            cells.append(CellRecord(idx, key, self.dimension(P), P, d_v, comps, starts))
        sets = [[frozenset(seq) for seq in c.key] for c in cells]
        for c in cells:
            for d in cells:
                if d.dimension < c.dimension and all(a <= b for a, b in zip(sets[d.index], sets[c.index])):
                    c.faces.append(d.index)
                    if d.dimension == 0:
                        c.vertices.append(d.index)
            if c.dimension == 0:
                c.vertices.append(c.index)
        return CellComplexRecord(self.pieces, cells)

    def state_function(self, cell: CellRecord) -> PLFunction:
        P, m = cell.divisor, tuple(cell.start_slopes[p] for p in self.pieces)
        return self.function(P, m)


# -- public operations ---------------------------------------------------------------

def _support_has_smooth_cut(G: MetricGraph, P: Divisor) -> bool:
    smooth = [p for p in P.support if G.smooth(p)]
    return bool(smooth) and count_components_minus(G, smooth) > 1


def enumerate_cells(G: MetricGraph, D: Divisor, slope_bound=None, cap: int = 100000) -> CellComplexRecord:
    return LinearSystem(G, D, slope_bound, cap).cells()


def _firable_covers(G: MetricGraph, P: Divisor) -> bool:
    """Do two proper subgraphs that can fire on ``P`` cover ``G``?"""
    eng = LinearSystem.__new__(LinearSystem)
    eng.G, eng.slope_bound = G, None
    R = _Refinement(G, set(P.support) | {G.vertex_point(v) for v in G.vertices})
    firable = []
    for E1, N1 in eng._subgraph_choices(R, P):
        germs = eng._germs(R, E1, N1)
        if germs and all(len(g) <= P[x] for x, g in germs.items()):
            firable.append((E1, frozenset(N1)))
    all_e = set(range(len(R.subedges)))
    all_n = set(R.incident)
    for (E1, N1), (E2, N2) in itertools.combinations(firable, 2):
        if E1 | E2 == all_e and N1 | N2 >= all_n:
            return True
    return False


def _generator_set(eng: LinearSystem, with_extremal=True) -> GeneratorSet:
    cx = eng.cells()
    fs, ds, ext = [], [], []
    for c in cx.of_dimension(0):
        if _support_has_smooth_cut(eng.G, c.divisor):
            continue
        fs.append(eng.state_function(c))
        ds.append(c.divisor)
        ext.append(not _firable_covers(eng.G, c.divisor) if with_extremal else False)
    return GeneratorSet(fs, ds, ext)


def generating_set(G: MetricGraph, D: Divisor, slope_bound=None, cap: int = 100000) -> GeneratorSet:
    """Elements of R(D) whose divisor support contains no smooth cut set.

    Computed as the 0-cells of |D| passing that test; the ``extremal`` flags
    are filled in as well.
    """
    return _generator_set(LinearSystem(G, D, slope_bound, cap))


def extremals(G: MetricGraph, D: Divisor, slope_bound=None, cap: int = 100000) -> GeneratorSet:
    return generating_set(G, D, slope_bound, cap).extremal_subset()


def express_in_generators(f: PLFunction, gens: GeneratorSet) -> list:
    """Coefficients ``a_i`` with ``max_i (a_i + g_i) = f``.

    Uses the residuation ``a_i = min (f - g_i)``; raises :class:`NotInSpan`
    if the tropical combination misses ``f``.
    """
    if not len(gens):
        raise NotInSpan("empty generating set")
    coeffs = [(f - g).min_value for g in gens.functions]
    back = tropical_sum(g + a for a, g in zip(coeffs, gens.functions))
    if back != f:
        raise NotInSpan("function is not in the tropical span of the generators")
    return [(a, i) for i, a in enumerate(coeffs)]


def cell_dimension(G: MetricGraph, D: Divisor, Dp: Divisor) -> int:
    if not Dp.is_effective() or is_linearly_equivalent(G, D, Dp) is None:
        raise NotEquivalent("Dp is not an effective divisor equivalent to D")
    base = _Refinement(G, D.support)
    nodes = set(base.incident)
    return count_components_minus(G, [p for p in Dp.support if p not in nodes]) - 1


def one_cells_at(G: MetricGraph, D: Divisor, Dp: Divisor, slope_bound=None) -> list:
    """One weighted move per 1-cell of |D| incident to the 0-cell ``Dp``."""
    if cell_dimension(G, D, Dp) != 0:
        raise NotAVertex("Dp is not a 0-cell")
    eng = LinearSystem(G, D, slope_bound)
    f = is_linearly_equivalent(G, D, Dp)
    P, m = eng.state_of(f)
    seen = {}
    for R, E1, N1, cmap in eng.moves(P):
        lam = eng.event(R, cmap)
        Q = eng.apply(P, m, R, E1, cmap, lam / 2)
        if eng.dimension(Q[0]) != 1:
            continue
        k = eng.key(*Q)
        if k in seen:
            continue
        g = eng.move_function(R, E1, cmap, lam / 2)
        seen[k] = WeightedChipFiringMove(level_set(g, g.min_value), level_set(g, 0), g)
    return [seen[k] for k in sorted(seen)]


def firing_poset(G: MetricGraph, D: Divisor, slope_bound=None) -> list:
    """Elements ``(Γ', c)`` with boundary in ``supp(D)`` and ``Σ c_e ≤ D(x)``."""
    if not D.is_effective() or D.degree == 0:
        return []
    eng = LinearSystem.__new__(LinearSystem)
    eng.G, eng.slope_bound = G, slope_bound
    R = _Refinement(G, set(D.support) | {G.vertex_point(v) for v in G.vertices})
    out = []
    for E1, N1 in eng._subgraph_choices(R, D):
        germs = eng._germs(R, E1, N1)
        if not germs or any(len(g) > D[x] for x, g in germs.items()):
            continue
        ivs: dict = {}
        for i in E1:
            eid, a, b, _, _ = R.subedges[i]
            ivs.setdefault(eid, []).append((a, b))
        sub = ClosedSubgraph.make(G, [p.ident for p in N1 if p.is_vertex], ivs)
        sub = sub.union(G, ClosedSubgraph.from_points(G, [p for p in N1 if not p.is_vertex]))
        nodes = sorted(germs)
        options = [list(eng._compositions(len(germs[x]), D[x])) for x in nodes]
        for combo in itertools.product(*options):
            gl = []
            for x, cs in zip(nodes, combo):
                for (i, end), c in zip(germs[x], cs):
                    eid = R.subedges[i][0]
                    gl.append((x, eid, 1 if end == 0 else -1, c))
            out.append(FiringPosetElement(sub, tuple(sorted(gl, key=repr))))
    return out


def _contained(G: MetricGraph, A: ClosedSubgraph, B: ClosedSubgraph) -> bool:
    if not A.vertices <= B.vertices:
        return False
    bm = B.interval_map()
    for eid, lst in A.intervals:
        for a, b in lst:
            if not any(x <= a and b <= y for x, y in bm.get(eid, ())):
                return False
    return True


def poset_less(G: MetricGraph):
    def less(p: FiringPosetElement, q: FiringPosetElement) -> bool:
        if p == q or not _contained(G, p.subgraph, q.subgraph):
            return False
        pm, qm = p.germ_map(), q.germ_map()
        return all(pm[g] >= qm[g] for g in pm.keys() & qm.keys())
    return less


def link_fine_subdivision(G: MetricGraph, D: Divisor, slope_bound=None) -> SimplicialComplex:
    """Order complex of the firing poset."""
    elems = firing_poset(G, D, slope_bound)
    return order_complex(elems, poset_less(G))


# -- random elements ----------------------------------------------------------------

def random_element(eng: LinearSystem, rng: random.Random, steps: int = 3) -> PLFunction:
    """Random element of R(D) from a chain of random partial moves."""
    if eng.is_empty:
        raise InvalidInput("the linear system is empty")
    P, m = eng.state_of(eng.f0)
    for _ in range(steps):
        mv = list(itertools.islice(eng.moves(P), 400))
        if not mv:
            break
        R, E1, N1, cmap = rng.choice(mv)
        lam = eng.event(R, cmap)
        t = lam * Fraction(rng.randint(1, 8), 8)
        P, m = eng.apply(P, m, R, E1, cmap, t)
    return eng.function(P, m)

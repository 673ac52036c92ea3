"""Maps to tropical projective space, balancing, degree and ampleness."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Optional, Sequence

from .errors import NotBasePointFree, TooLarge, Unbalanced
from .functions import Divisor, PLFunction
from .graph import GraphPoint, MetricGraph, as_fraction


# -- points of TP^{n-1} ---------------------------------------------------------

class TropicalProjectivePoint:
    """Point of R^n modulo the all-ones vector.

    Coordinates are stored normalized so that the minimum is 0.
    """

    __slots__ = ("coords",)

    def __init__(self, coords: Sequence):
        c = [as_fraction(x) for x in coords]
        if not c:
            raise ValueError("empty coordinate vector")
        m = min(c)
        self.coords = tuple(x - m for x in c)

    def __len__(self) -> int:
        return len(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    def __iter__(self):
        return iter(self.coords)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TropicalProjectivePoint):
            try:
                other = TropicalProjectivePoint(other)
            except (TypeError, ValueError):
                return NotImplemented
        return self.coords == other.coords

    def __hash__(self) -> int:
        return hash(self.coords)

    def __lt__(self, other) -> bool:
        return self.coords < other.coords

    def chart(self) -> tuple:
        """Representative with first coordinate 0."""
        return tuple(x - self.coords[0] for x in self.coords)

    def __repr__(self) -> str:
        return "TP(" + ", ".join(str(x) for x in self.coords) + ")"


def _primitive(s) -> tuple[tuple, int]:
    """Primitive direction (min 0) and multiplicity of an integer slope vector."""
    m = min(s)
    d = [int(x - m) for x in s]
    g = 0
    for x in d:
        g = gcd(g, x)
    if g == 0:
        return tuple(d), 0
    return tuple(x // g for x in d), g


def evaluate_map(F: Sequence[PLFunction], x: GraphPoint) -> TropicalProjectivePoint:
    """phi_F(x) = (f_1(x), ..., f_n(x)) in TP^{n-1}."""
    if not F:
        raise ValueError("F must be nonempty")
    return TropicalProjectivePoint([f(x) for f in F])


# -- base points and the unbalanced vector ----------------------------------------

@dataclass
class BasePointCheck:
    """Outcome of :func:`is_base_point_free`.

    ``witness`` maps every point of the union of supports to an index ``i``
    with ``(D + (f_i))(x) = 0`` when free; otherwise ``base_point`` is a
    point in every support.
    """

    free: bool
    witness: dict = field(default_factory=dict)
    base_point: Optional[GraphPoint] = None

    def __bool__(self) -> bool:
        return self.free


def _divisors(F, D: Divisor) -> list:
    return [D + f.principal_divisor() for f in F]


def is_base_point_free(F: Sequence[PLFunction], D: Divisor) -> BasePointCheck:
    divs = _divisors(F, D)
    pts = sorted(set().union(*(set(E.support) for E in divs))) if divs else []
    wit = {}
    for p in pts:
        i = next((i for i, E in enumerate(divs) if E[p] == 0), None)
        if i is None:
            return BasePointCheck(False, {}, p)
        wit[p] = i
    if not divs:
        return BasePointCheck(False, {}, None)
    return BasePointCheck(True, wit)


def _require_bpf(F, D) -> list:
    divs = _divisors(F, D)
    chk = is_base_point_free(F, D)
    if not chk.free:
        raise NotBasePointFree(f"base point at {chk.base_point!r}")
    return divs


def unbalanced_vector(F: Sequence[PLFunction], x: GraphPoint, D: Divisor) -> tuple:
    """u(x) with ``u(x)_i = (D + (f_i))(x)``; zero iff phi_F is balanced at x."""
    divs = _require_bpf(F, D)
    u = [E[x] for E in divs]
    m = min(u)
    return tuple(c - m for c in u)


# -- embedded curves ----------------------------------------------------------------

@dataclass
class Segment:
    start: TropicalProjectivePoint
    end: TropicalProjectivePoint
    direction: tuple          # primitive, from start to end, min 0
    multiplicity: int


@dataclass
class Ray:
    base: TropicalProjectivePoint
    direction: tuple          # primitive, max coordinate 0
    multiplicity: int


@dataclass
class EmbeddedCurve:
    """Bounded segments plus symbolic unbounded rays in TP^{n-1}."""

    n: int
    segments: list
    rays: list

    def _stars(self) -> dict:
        star: dict = {}
        for s in self.segments:
            neg = tuple(-x for x in s.direction)
            star.setdefault(s.start, []).append((s.direction, s.multiplicity))
            star.setdefault(s.end, []).append((neg, s.multiplicity))
        for r in self.rays:
            star.setdefault(r.base, []).append((r.direction, r.multiplicity))
        return star

    def unbalanced_points(self) -> list:
        out = []
        for p, vs in self._stars().items():
            tot = [sum(m * v[i] for v, m in vs) for i in range(self.n)]
            if len(set(tot)) > 1:
                out.append(p)
        return sorted(out)

    def is_balanced(self) -> bool:
        return not self.unbalanced_points()


def _subedges(G: MetricGraph, F, extra=()) -> list:
    """Common refinement: (edge, a, b) with every f affine on [a, b]."""
    cuts: dict = {}
    for p in extra:
        if not p.is_vertex:
            cuts.setdefault(p.ident, set()).add(p.offset)
    out = []
    for e in G.edges:
        offs = set(cuts.get(e.id, ()))
        for f in F:
            offs.update(f.offsets(e.id))
        offs = sorted(offs | {Fraction(0), e.length})
        out.extend((e.id, a, b) for a, b in zip(offs, offs[1:]))
    return out


def _slopes(F, eid, a) -> tuple:
    return tuple(f.outgoing_slope(eid, a, 1) for f in F)


def _line_key(p: TropicalProjectivePoint, d: tuple):
    """(base, t) with p = base + t*d mod 1 and a canonical base on the line."""
    i0 = d.index(0)
    j = next(k for k, x in enumerate(d) if x > 0)
    w = [x - p[i0] for x in p]
    t = w[j] / d[j]
    return tuple(x - t * y for x, y in zip(w, d)), t


def _image_segments(G: MetricGraph, F, extra=()) -> list:
    """Per sub-edge: (edge, a, b, phi(a), phi(b), slope vector)."""
    out = []
    for eid, a, b in _subedges(G, F, extra):
        pa = evaluate_map(F, G.point(eid, a))
        pb = evaluate_map(F, G.point(eid, b))
        out.append((eid, a, b, pa, pb, _slopes(F, eid, a)))
    return out


def balance(G: MetricGraph, F: Sequence[PLFunction], D: Divisor) -> EmbeddedCurve:
    """Image of phi_F with multiplicities, closed up by rays -u(x).

    Collinear overlapping image segments are merged and their
    multiplicities summed over the fibre.
    """
    F = list(F)
    divs = _require_bpf(F, D)
    n = len(F)
    lines: dict = {}
    for eid, a, b, pa, pb, s in _image_segments(G, F):
        d, g = _primitive(s)
        if g == 0:
            continue  # contracted
        flip = tuple(max(d) - x for x in d)
        if flip < d:
            d, pa = flip, pb   # walk the sub-edge backwards
        base, ta = _line_key(pa, d)
        tb = ta + (b - a) * g
        lines.setdefault((d, base), []).append((ta, tb, g))
    segments = []
    for (d, base), ivs in sorted(lines.items()):
        cuts = sorted({t for a, b, _ in ivs for t in (a, b)})
        pieces = []
        for lo, hi in zip(cuts, cuts[1:]):
            m = sum(g for a, b, g in ivs if a <= lo and hi <= b)
            if not m:
                continue
            if pieces and pieces[-1][1] == lo and pieces[-1][2] == m:
                pieces[-1][1] = hi
            else:
                pieces.append([lo, hi, m])
        for lo, hi, m in pieces:
            p = TropicalProjectivePoint([x + lo * y for x, y in zip(base, d)])
            q = TropicalProjectivePoint([x + hi * y for x, y in zip(base, d)])
            segments.append(Segment(p, q, d, m))
    rays: dict = {}
    pts = sorted(set().union(*(set(E.support) for E in divs)))
    for x in pts:
        u = [E[x] for E in divs]
        d, g = _primitive(u)
        if g == 0:
            continue
        key = (evaluate_map(F, x), tuple(-c for c in d))
        rays[key] = rays.get(key, 0) + g
    ray_list = [Ray(b, d, m) for (b, d), m in sorted(rays.items())]
    return EmbeddedCurve(n, segments, ray_list)


def curve_degree(C: EmbeddedCurve) -> int:
    """Degree d with sum of m_i v_i = -d * 1 over the rays."""
    bad = C.unbalanced_points()
    if bad:
        raise Unbalanced(f"curve is not balanced at {bad[0]!r}")
    tot = [0] * C.n
    for r in C.rays:
        top = max(r.direction)
        for i, x in enumerate(r.direction):
            tot[i] += r.multiplicity * (x - top)
    if len(set(tot)) != 1 or tot[0] >= 0:
        raise Unbalanced(f"ray sum {tot} is not a negative multiple of the ones vector")
    return -tot[0]


# -- tropical convex hulls (max-plus) -----------------------------------------------

def _solve(rows, rhs):
    """Exact least solution of a consistent square-or-tall system, else None."""
    m = len(rows[0]) if rows else 0
    A = [list(map(Fraction, r)) + [Fraction(b)] for r, b in zip(rows, rhs)]
    piv_cols = []
    r = 0
    for c in range(m):
        p = next((i for i in range(r, len(A)) if A[i][c] != 0), None)
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        pv = A[r][c]
        A[r] = [x / pv for x in A[r]]
        for i in range(len(A)):
            if i != r and A[i][c] != 0:
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[r])]
        piv_cols.append(c)
        r += 1
    if any(all(x == 0 for x in row[:m]) and row[m] != 0 for row in A):
        return None
    if len(piv_cols) < m:
        return None
    return [A[i][m] for i in range(m)]


def _rank(vectors) -> int:
    A = [list(map(Fraction, v)) for v in vectors]
    r = 0
    cols = len(A[0]) if A else 0
    for c in range(cols):
        p = next((i for i in range(r, len(A)) if A[i][c] != 0), None)
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        for i in range(r + 1, len(A)):
            f = A[i][c] / A[r][c]
            A[i] = [x - f * y for x, y in zip(A[i], A[r])]
        r += 1
    return r


@dataclass
class TropicalPolytope:
    """Bounded cells of the type decomposition of a max-plus hull.

    ``cells`` holds ``(type, vertex indices, dimension)`` where ``type[i]``
    is the set of coordinates ``j`` maximizing ``v_ij - x_j``.
    """

    points: list
    vertices: list
    cells: list

    @property
    def dimension(self) -> int:
        return max((c[2] for c in self.cells), default=-1)

    def f_vector(self) -> list:
        out = [0] * (self.dimension + 1)
        for _, _, d in self.cells:
            out[d] += 1
        return out

    def type_of(self, x) -> tuple:
        return _type(self.points, x)

    def contains(self, x) -> bool:
        T = self.type_of(x)
        return set().union(*T) == set(range(len(self.points[0])))

    def type_graphs(self) -> set:
        """Cells as bipartite edge sets {(point, coordinate)}."""
        return {frozenset((i, j) for i, S in enumerate(T) for j in S) for T, _, _ in self.cells}


def _type(points, x) -> tuple:
    out = []
    for v in points:
        vals = [a - b for a, b in zip(v, x)]
        top = max(vals)
        out.append(frozenset(j for j, a in enumerate(vals) if a == top))
    return tuple(out)


def tconv_of_finite_set(points: Sequence, limit: int = 200000) -> TropicalPolytope:
    """Max-plus tropical convex hull of finitely many points of TP^{n-1}.

    Vertices are found among solutions of n-1 equations
    ``x_j - x_k = v_ij - v_ik`` forming a spanning tree on the coordinates;
    cells are intersections of vertex types that are realized at the
    barycentre of their vertices.
    """
    pts = [TropicalProjectivePoint(p) for p in points]
    if not pts:
        raise ValueError("need at least one point")
    n = len(pts[0])
    if any(len(p) != n for p in pts):
        raise ValueError("points must have the same length")
    if n == 1:
        return TropicalPolytope(pts, [pts[0]], [((frozenset({0}),) * len(pts), (0,), 0)])
    eqs = [(i, j, k) for i in range(len(pts)) for j, k in itertools.combinations(range(n), 2)]
    ncomb = 1
    for t in range(n - 1):
        ncomb = ncomb * (len(eqs) - t) // (t + 1)
    if ncomb > limit:
        raise TooLarge(f"{ncomb} equation systems exceed the limit {limit}")
    verts = {}
    for choice in itertools.combinations(eqs, n - 1):
        parent = list(range(n))

        def find(a):
            while parent[a] != a:
                a = parent[a]
            return a
        ok = True
        for _, j, k in choice:
            a, b = find(j), find(k)
            if a == b:
                ok = False
                break
            parent[a] = b
        if not ok:
            continue
        # unknowns x_1..x_{n-1}, x_0 = 0
        rows, rhs = [], []
        for i, j, k in choice:
            row = [0] * (n - 1)
            if j:
                row[j - 1] += 1
            if k:
                row[k - 1] -= 1
            rows.append(row)
            rhs.append(pts[i][j] - pts[i][k])
        sol = _solve(rows, rhs)
        x = TropicalProjectivePoint([0] + sol)
        if x in verts:
            continue
        T = _type(pts, x)
        if set().union(*T) == set(range(n)):
            verts[x] = T
    vlist = sorted(verts)
    vtypes = [verts[v] for v in vlist]
    # close the vertex types under intersection
    types = set(vtypes)
    frontier = list(types)
    while frontier:
        new = []
        for A in frontier:
            for B in list(types):
                C = tuple(a & b for a, b in zip(A, B))
                if C not in types:
                    types.add(C)
                    new.append(C)
        frontier = new
    cells = []
    for T in types:
        idx = tuple(i for i, S in enumerate(vtypes) if all(a <= b for a, b in zip(T, S)))
        bc = [sum(vlist[i][c] for i in idx) / len(idx) for c in range(n)]
        if set().union(*T) != set(range(n)) or _type(pts, bc) != T:
            continue
        base = vlist[idx[0]].chart()
        dim = _rank([[a - b for a, b in zip(vlist[i].chart(), base)] for i in idx[1:]]) if len(idx) > 1 else 0
        cells.append((T, idx, dim))
    cells.sort(key=lambda c: (c[2], c[1]))
    return TropicalPolytope(pts, vlist, cells)


# -- very ampleness and hyperellipticity ----------------------------------------------

@dataclass
class AmplenessResult:
    """``collision`` holds two distinct graph points with the same image."""

    very_ample: bool
    collision: Optional[tuple] = None
    generators: int = 0
    extremal_agrees: Optional[bool] = None

    def __bool__(self) -> bool:
        return self.very_ample


def _chart(p: TropicalProjectivePoint):
    return p.chart()


def _pair_collision(G, A, B):
    """Distinct graph points on image segments A and B with equal images."""
    ea, a0, a1, pa, _, sa = A
    eb, b0, b1, pb, _, sb = B
    n = len(sa)
    P, Q = _chart(pa), _chart(pb)
    dA = [x - sa[0] for x in sa]
    dB = [x - sb[0] for x in sb]
    LA, LB = a1 - a0, b1 - b0
    # P + s dA = Q + t dB, coordinates 1..n-1
    rows = [[dA[c], -dB[c]] for c in range(1, n)]
    rhs = [Q[c] - P[c] for c in range(1, n)]
    if _rank(rows) == 2:
        sol = _solve(rows, rhs)
        if sol is None:
            return None
        s, t = sol
        if 0 <= s <= LA and 0 <= t <= LB:
            x, y = G.point(ea, a0 + s), G.point(eb, b0 + t)
            if x != y:
                return (x, y)
        return None
    # parallel: B lies on A's line iff Q - P is a multiple of dA
    k = next(c for c in range(1, n) if dA[c] != 0)
    s0 = (Q[k] - P[k]) / dA[k]
    if any(P[c] + s0 * dA[c] != Q[c] for c in range(1, n)):
        return None
    ratio = dB[k] / dA[k]   # B(t) = A(s0 + ratio t)
    s_lo, s_hi = sorted((s0, s0 + ratio * LB))
    lo, hi = max(s_lo, 0), min(s_hi, LA)
    if lo > hi:
        return None
    for s in (lo, hi, (lo + hi) / 2):
        t = (s - s0) / ratio
        x, y = G.point(ea, a0 + s), G.point(eb, b0 + t)
        if x != y:
            return (x, y)
    return None


def _injectivity(G: MetricGraph, F) -> Optional[tuple]:
    segs = _image_segments(G, F)
    live = []
    for S in segs:
        eid, a, b, _, _, s = S
        if len(set(s)) == 1:
            return (G.point(eid, a), G.point(eid, b))
        live.append(S)
    for A, B in itertools.combinations(live, 2):
        hit = _pair_collision(G, A, B)
        if hit is not None:
            return hit
    return None


def is_very_ample(G: MetricGraph, D: Divisor, slope_bound=None, cap: int = 100000,
                  check_extremal: bool = True) -> AmplenessResult:
    """Decide injectivity of phi_F for the canonical generating set F of R(D)."""
    from .linear_system import generating_set

    gens = generating_set(G, D, slope_bound, cap)
    hit = _injectivity(G, gens.functions)
    agrees = None
    if check_extremal:
        ext = gens.extremal_subset().functions
        if ext:
            agrees = (_injectivity(G, ext) is None) == (hit is None)
    return AmplenessResult(hit is None, hit, len(gens), agrees)


@dataclass
class HyperellipticResult:
    witness: Optional[Divisor]
    verified_level: int
    rank: Optional[int] = None

    def __bool__(self) -> bool:
        return self.witness is not None


def is_hyperelliptic(G: MetricGraph, max_level: Optional[int] = None) -> HyperellipticResult:
    """Search for a degree-2 divisor of rank 1.

    Effective degree-2 divisors on the integer-scaled subdivisions of levels
    ``k0`` and ``2 k0`` are scanned (``k0`` is 2 with loops, else 1), one per
    reduced class.  A tree has no such divisor.  ``verified_level`` records
    the finest level searched.
    """
    from .divisors import Discretization, rank

    if G.genus == 0:
        return HyperellipticResult(None, 0)
    k0 = 2 if any(e.is_loop for e in G.edges) else 1
    levels = [k0, 2 * k0] if max_level is None else [k for k in (k0, 2 * k0) if k <= max_level] or [k0]
    done = 0
    for k in levels:
        disc = Discretization(G, (), k)
        M = disc.model
        seen = set()
        for i, j in itertools.combinations_with_replacement(range(M.n), 2):
            x = [0] * M.n
            x[i] += 1
            x[j] += 1
            red = M.reduce(x, 0)
            key = red.tobytes()
            if key in seen:
                continue
            seen.add(key)
            Dw = disc.divisor(x)
            r = rank(G, Dw)
            if r == 1:
                return HyperellipticResult(Dw, k, r)
        done = k
    return HyperellipticResult(None, done)

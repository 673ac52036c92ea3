"""Critical groups of subdivisions and the rational Picard group.

Levels refer to :func:`tropsys.graph.subdivide`: the level-``k`` model of an
integer-length graph has all edges of length ``1/k``.  Chip configurations
on a level are dicts ``{vertex id: chips}``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd, lcm
from typing import Optional

import numpy as np

from . import _kernels
from .errors import InvalidInput, NotDivisible, NotReady, NotSuperstable, TooLarge
from .finite import FiniteModel
from .functions import Divisor
from .graph import GraphPoint, MetricGraph, subdivide, subdivision_point, subdivision_vertex

DEFAULT_CAP = 10 ** 5


# -- integer linear algebra -------------------------------------------------------

def smith_normal_form(M) -> list:
    """Diagonal of the Smith normal form of an integer matrix.

    Plain elimination over Python integers; the pivot is always the entry of
    least absolute value (first in row-major order), so the run is
    deterministic.
    """
    A = [[int(x) for x in row] for row in M]
    rows = len(A)
    cols = len(A[0]) if rows else 0
    diag = []
    t = 0
    while t < min(rows, cols):
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                if A[i][j] and (best is None or abs(A[i][j]) < abs(A[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        i, j = best
        A[t], A[i] = A[i], A[t]
        for row in A:
            row[t], row[j] = row[j], row[t]
        while True:
            p = A[t][t]
            dirty = False
            for i in range(t + 1, rows):
                q = A[i][t] // p
                if q:
                    A[i] = [a - q * b for a, b in zip(A[i], A[t])]
                if A[i][t]:
                    dirty = True
            for j in range(t + 1, cols):
                q = A[t][j] // p
                if q:
                    for row in A:
                        row[j] -= q * row[t]
                if A[t][j]:
                    dirty = True
            if not dirty:
                bad = next(((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols)
                            if A[i][j] % p), None)
                if bad is None:
                    break
                A[t] = [a + b for a, b in zip(A[t], A[bad[0]])]
                continue
            # move the smallest remaining entry of row/column t to the pivot
            cand = [(abs(A[i][t]), i, t) for i in range(t, rows) if A[i][t]]
            cand += [(abs(A[t][j]), t, j) for j in range(t, cols) if A[t][j]]
            _, i, j = min(cand)
            A[t], A[i] = A[i], A[t]
            for row in A:
                row[t], row[j] = row[j], row[t]
        diag.append(abs(A[t][t]))
        t += 1
    return diag + [0] * (min(rows, cols) - len(diag))


def integer_determinant(M) -> int:
    """Bareiss fraction-free determinant."""
    A = [[int(x) for x in row] for row in M]
    n = len(A)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            sw = next((i for i in range(k + 1, n) if A[i][k]), None)
            if sw is None:
                return 0
            A[k], A[sw] = A[sw], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


# -- Laplacians and critical groups ------------------------------------------------

@dataclass
class LaplacianMatrix:
    vertices: tuple
    base_vertex: str
    L: np.ndarray
    L0: np.ndarray

    @property
    def determinant(self) -> int:
        return integer_determinant(self.L0.tolist())


def reduced_laplacian(Gk: MetricGraph, v0=None) -> LaplacianMatrix:
    M = FiniteModel(Gk)
    v0 = M.vertices[0] if v0 is None else str(v0)
    keep = [i for i, v in enumerate(M.vertices) if v != v0]
    L = M.laplacian
    return LaplacianMatrix(M.vertices, v0, L, L[np.ix_(keep, keep)])


def superstables(Gk: MetricGraph, v0=None, cap: int = DEFAULT_CAP) -> list:
    """All superstable configurations with respect to ``v0``."""
    M = FiniteModel(Gk)
    v0 = M.vertices[0] if v0 is None else str(v0)
    lap = reduced_laplacian(Gk, v0)
    order = lap.determinant
    if order > cap:
        raise TooLarge(f"{order} superstables exceed the cap {cap}")
    q = M.index[v0]
    rows = _kernels.superstables(M.A, M.deg, q, cap)
    if len(rows) > cap:
        raise TooLarge(f"more than {cap} superstables")
    return [{M.vertices[i]: int(c) for i, c in enumerate(r) if c} for r in rows]


@dataclass
class CriticalGroup:
    invariant_factors: list
    order: int
    base_vertex: str
    level: int
    representatives: Optional[list] = field(default=None, repr=False)

    def as_dict(self) -> dict:
        return {"invariant_factors": self.invariant_factors, "order": self.order,
                "base_vertex": self.base_vertex, "level": self.level}


def critical_group(Gk: MetricGraph, v0=None, level: int = 1, cap: int = DEFAULT_CAP,
                   with_representatives: bool = True) -> CriticalGroup:
    lap = reduced_laplacian(Gk, v0)
    diag = smith_normal_form(lap.L0.tolist())
    order = 1
    for d in diag:
        order *= d
    factors = [d for d in diag if d > 1]
    reps = superstables(Gk, lap.base_vertex, cap) if with_representatives else None
    return CriticalGroup(factors, order, lap.base_vertex, level, reps)


def superstable_reduce(Gk: MetricGraph, config: dict, v0) -> dict:
    """Superstable configuration equivalent to ``config`` modulo ``v0``."""
    M = FiniteModel(Gk)
    x = np.zeros(M.n, dtype=np.int64)
    for v, c in config.items():
        x[M.index[v]] += c
    q = M.index[str(v0)]
    x[q] -= int(x.sum())
    red = M.reduce(x, q)
    return {M.vertices[i]: int(c) for i, c in enumerate(red) if c and i != q}


def is_superstable(Gk: MetricGraph, config: dict, v0) -> bool:
    M = FiniteModel(Gk)
    x = np.zeros(M.n, dtype=np.int64)
    for v, c in config.items():
        x[M.index[v]] += c
    q = M.index[str(v0)]
    if any(x[i] < 0 for i in range(M.n) if i != q):
        return False
    return _kernels.is_superstable(M.A, x, q)


# -- transition maps ----------------------------------------------------------------

def _reindex(G: MetricGraph, config: dict, k1: int, k2: int) -> dict:
    out = {}
    for vid, c in config.items():
        w = subdivision_vertex(G, subdivision_point(G, vid, k1), k2)
        out[w] = out.get(w, 0) + c
    return out


def transition_map(G: MetricGraph, config: dict, k1: int, k2: int, v0=None) -> dict:
    """Re-index a superstable configuration of level ``k1`` into level ``k2``."""
    if k2 % k1:
        raise NotDivisible(f"{k2} is not a multiple of {k1}")
    v0 = min(G.vertices) if v0 is None else str(v0)
    if not is_superstable(subdivide(G, k1), config, v0):
        raise NotSuperstable("configuration is not superstable")
    out = _reindex(G, config, k1, k2)
    if not is_superstable(subdivide(G, k2), out, v0):  # pragma: no cover
        raise NotSuperstable("image is not superstable")
    return out


def _fire_set(Gk: MetricGraph, config: dict, S) -> dict:
    out = dict(config)
    S = set(S)
    for e in Gk.edges:
        if e.is_loop:
            continue
        a_in, b_in = e.tail in S, e.head in S
        if a_in and not b_in:
            out[e.tail] = out.get(e.tail, 0) - 1
            out[e.head] = out.get(e.head, 0) + 1
        elif b_in and not a_in:
            out[e.head] = out.get(e.head, 0) - 1
            out[e.tail] = out.get(e.tail, 0) + 1
    return {v: c for v, c in out.items() if c}


def emulate_vertex_firing(G: MetricGraph, k1: int, k2: int, v: str, config: dict):
    """Emulate firing ``v`` of level ``k1`` by nested firings at level ``k2``.

    Returns ``(sequence, result)`` where ``sequence`` lists the fired vertex
    sets ``[H_{m-1}, ..., H_0]`` and ``result`` the level-``k2``
    configuration; it equals the re-indexed single firing at level ``k1``.
    """
    if k2 % k1:
        raise NotDivisible(f"{k2} is not a multiple of {k1}")
    G1, G2 = subdivide(G, k1), subdivide(G, k2)
    deg = sum(1 for e in G1.edges if not e.is_loop and v in (e.tail, e.head))
    if config.get(v, 0) < deg:
        raise NotReady(f"vertex {v!r} holds {config.get(v, 0)} chips but has degree {deg}")
    m = k2 // k1
    w = subdivision_vertex(G, subdivision_point(G, v, k1), k2)
    H = [{w}]
    for _ in range(1, m):
        prev = H[-1]
        grown = set(prev)
        for e in G2.edges:
            if e.tail in prev:
                grown.add(e.head)
            if e.head in prev:
                grown.add(e.tail)
        H.append(grown)
    seq = [sorted(h) for h in reversed(H)]
    cur = _reindex(G, config, k1, k2)
    for h in seq:
        cur = _fire_set(G2, cur, h)
    expect = _reindex(G, _fire_set(G1, config, {v}), k1, k2)
    if cur != expect:  # pragma: no cover
        raise AssertionError("emulation does not match the coarse firing")
    return seq, cur


# -- the rational Picard group ---------------------------------------------------------

def _level_of(D: Divisor) -> int:
    k = 1
    for p in D.support:
        k = lcm(k, p.offset.denominator)
    return k


@dataclass(frozen=True)
class PicardClass:
    """Class of a degree-0 divisor, stored at its least sufficient level.

    ``representative`` is the superstable configuration (as a divisor on
    graph points, base vertex omitted) with respect to ``base_vertex``.
    """

    graph: MetricGraph
    level: int
    representative: Divisor
    base_vertex: str

    def divisor(self) -> Divisor:
        """Degree-0 divisor ``c - deg(c) * v0`` representing the class."""
        return self.representative - Divisor({GraphPoint("v", self.base_vertex): self.representative.degree})

    def promote(self, k: int) -> "PicardClass":
        if k % self.level:
            raise NotDivisible(f"{k} is not a multiple of {self.level}")
        return _class_at(self.graph, self.divisor(), k, self.base_vertex)

    def _common(self, other: "PicardClass"):
        k = lcm(self.level, other.level)
        return self.promote(k), other.promote(k), k

    def __eq__(self, other) -> bool:
        if not isinstance(other, PicardClass):
            return NotImplemented
        a, b, _ = self._common(other)
        return a.representative == b.representative

    def __hash__(self) -> int:
        return hash(self.representative)

    def __add__(self, other: "PicardClass") -> "PicardClass":
        return picard_class(self.graph, self.divisor() + other.divisor(), self.base_vertex)

    def __neg__(self) -> "PicardClass":
        return picard_class(self.graph, -self.divisor(), self.base_vertex)

    def __sub__(self, other: "PicardClass") -> "PicardClass":
        return self + (-other)

    def is_identity(self) -> bool:
        return self.representative.degree == 0 and len(self.representative) == 0

    def order(self) -> int:
        Gk = subdivide(self.graph, self.level)
        lap = reduced_laplacian(Gk, self.base_vertex)
        exponent = max(smith_normal_form(lap.L0.tolist()) + [1])
        acc = self
        n = 1
        while not acc.is_identity():
            acc = acc + self
            n += 1
            if n > exponent:  # pragma: no cover
                raise AssertionError("class order exceeds the group exponent")
        return n


def _class_at(G: MetricGraph, D: Divisor, k: int, v0: str) -> PicardClass:
    Gk = subdivide(G, k)
    config = {}
    for p, c in D.items():
        w = subdivision_vertex(G, p, k)
        config[w] = config.get(w, 0) + c
    red = superstable_reduce(Gk, config, v0)
    rep = Divisor((subdivision_point(G, w, k), c) for w, c in red.items())
    return PicardClass(G, k, rep, v0)


def picard_class(G: MetricGraph, D: Divisor, v0=None) -> PicardClass:
    """Class of a degree-0 divisor on rational points of an integer-length graph."""
    if D.degree != 0:
        raise InvalidInput("Picard classes are defined for degree-0 divisors")
    if any(e.length.denominator != 1 for e in G.edges):
        raise InvalidInput("edge lengths must be integers; scale the graph first")
    v0 = min(G.vertices) if v0 is None else str(v0)
    return _class_at(G, D, _level_of(D), v0)

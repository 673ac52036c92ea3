"""Finite models: Laplacians, reduced divisors and Baker-Norine rank.

A :class:`FiniteModel` freezes a :class:`MetricGraph` into integer arrays
indexed by sorted vertex ids.  Only the combinatorics matter here; edge
lengths are ignored.
"""

from __future__ import annotations

from fractions import Fraction
from functools import cached_property

import numpy as np

from . import _kernels
from .errors import NotAVertex
from .functions import Divisor
from .graph import GraphPoint, MetricGraph


class FiniteModel:
    """Integer view of a model used for chip firing."""

    def __init__(self, graph: MetricGraph):
        self.graph = graph
        self.vertices = tuple(sorted(graph.vertices))
        self.index = {v: i for i, v in enumerate(self.vertices)}
        n = len(self.vertices)
        A = np.zeros((n, n), dtype=np.int64)
        for e in graph.edges:
            if e.is_loop:
                continue
            i, j = self.index[e.tail], self.index[e.head]
            A[i, j] += 1
            A[j, i] += 1
        self.A = A
        self.deg = A.sum(axis=1)

    @property
    def n(self) -> int:
        return len(self.vertices)

    @cached_property
    def laplacian(self) -> np.ndarray:
        return np.diag(self.deg) - self.A

    # -- conversions -----------------------------------------------------
    def vector(self, D: Divisor) -> np.ndarray:
        x = np.zeros(self.n, dtype=np.int64)
        for p, c in D.items():
            if not p.is_vertex or p.ident not in self.index:
                raise NotAVertex(f"{p!r} is not a vertex of the finite model")
            x[self.index[p.ident]] += c
        return x

    def divisor(self, x) -> Divisor:
        return Divisor((GraphPoint("v", self.vertices[i]), int(c))
                       for i, c in enumerate(x) if c)

    # -- reduction -------------------------------------------------------
    def _lift(self, x: np.ndarray, q: int) -> np.ndarray:
        """Equivalent vector that is nonnegative away from ``q``."""
        if all(x[i] >= 0 for i in range(self.n) if i != q):
            return x
        keep = [i for i in range(self.n) if i != q]
        L0 = self.laplacian[np.ix_(keep, keep)].astype(float)
        t = int(self.deg.max()) if self.n else 0
        while True:
            rhs = x[keep] - t
            z = np.floor(np.linalg.solve(L0, rhs.astype(float))).astype(np.int64)
            full = np.zeros(self.n, dtype=np.int64)
            full[keep] = z
            y = x - self.laplacian @ full
            if all(y[i] >= 0 for i in keep):
                return y
            t = 2 * t + 1  # float trouble: widen the margin

    def reduce(self, x: np.ndarray, q: int) -> np.ndarray:
        """The unique q-reduced vector equivalent to ``x``."""
        if self.n == 1:
            return np.asarray(x, dtype=np.int64).copy()
        y = self._lift(np.asarray(x, dtype=np.int64), q)
        return _kernels.reduce_nonnegative(self.A, y, q)

    def is_effective_class(self, x: np.ndarray, q: int = 0) -> bool:
        return self.reduce(x, q)[q] >= 0

    def solve_firing(self, diff: np.ndarray):
        """Integer ``z`` with ``L z = diff`` and ``z[0] = 0``, or ``None``."""
        n = self.n
        if int(np.sum(diff)) != 0:
            return None
        if n == 1:
            return np.zeros(1, dtype=np.int64)
        L = self.laplacian
        rows = [[Fraction(int(L[i, j])) for j in range(1, n)] + [Fraction(int(diff[i]))]
                for i in range(1, n)]
        m = n - 1
        for col in range(m):
            piv = next(r for r in range(col, m) if rows[r][col] != 0)
            rows[col], rows[piv] = rows[piv], rows[col]
            pv = rows[col][col]
            rows[col] = [a / pv for a in rows[col]]
            for r in range(m):
                if r != col and rows[r][col] != 0:
                    f = rows[r][col]
                    rows[r] = [a - f * b for a, b in zip(rows[r], rows[col])]
        sol = [rows[i][m] for i in range(m)]
        if any(s.denominator != 1 for s in sol):
            return None
        return np.array([0] + [int(s) for s in sol], dtype=np.int64)

    # -- rank --------------------------------------------------------------
    def rank(self, x: np.ndarray, probe=None, q: int = 0) -> int:
        """Baker-Norine rank of ``x``.

        ``probe`` lists the vertex indices that effective test divisors may
        use; it must be rank determining (all vertices by default).
        """
        probe = list(range(self.n)) if probe is None else list(probe)
        memo: dict = {}

        def at_least(y: np.ndarray, k: int) -> bool:
            y = self.reduce(y, q)
            if y[q] < 0:
                return False
            if k == 0:
                return True
            key = (y.tobytes(), k)
            if key in memo:
                return memo[key]
            ok = True
            for v in probe:
                z = y.copy()
                z[v] -= 1
                if not at_least(z, k - 1):
                    ok = False
                    break
            memo[key] = ok
            return ok

        x = np.asarray(x, dtype=np.int64)
        deg = int(x.sum())
        if deg < 0:
            return -1
        r = -1
        while r < deg and at_least(x, r + 1):
            r += 1
        return r

"""Divisors and tropical rational functions on a metric graph."""

from __future__ import annotations

from bisect import bisect_right
from fractions import Fraction
from typing import Callable, Iterable, Mapping

from .errors import InvalidInput, NonIntegralSlope
from .graph import GraphPoint, MetricGraph, as_fraction


class Divisor:
    """Finite integer combination of graph points."""

    __slots__ = ("_d", "_hash")

    def __init__(self, coeffs: Mapping[GraphPoint, int] | Iterable = ()):
        d: dict[GraphPoint, int] = {}
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        for p, c in items:
            if int(c) != c:
                raise InvalidInput(f"divisor coefficient {c!r} is not an integer")
            c = d.get(p, 0) + int(c)
            if c:
                d[p] = c
            else:
                d.pop(p, None)
        self._d = dict(sorted(d.items()))
        self._hash = None

    @classmethod
    def from_points(cls, points: Iterable[GraphPoint]) -> "Divisor":
        return cls((p, 1) for p in points)

    def __getitem__(self, p: GraphPoint) -> int:
        return self._d.get(p, 0)

    def items(self):
        return self._d.items()

    def __iter__(self):
        return iter(self._d)

    def __len__(self):
        return len(self._d)

    @property
    def degree(self) -> int:
        return sum(self._d.values())

    @property
    def support(self) -> list[GraphPoint]:
        return list(self._d)

    def is_effective(self) -> bool:
        return all(c > 0 for c in self._d.values())

    def __add__(self, other: "Divisor") -> "Divisor":
        return Divisor(list(self._d.items()) + list(other._d.items()))

    def __sub__(self, other: "Divisor") -> "Divisor":
        return Divisor(list(self._d.items()) + [(p, -c) for p, c in other._d.items()])

    def __neg__(self) -> "Divisor":
        return Divisor((p, -c) for p, c in self._d.items())

    def __mul__(self, k: int) -> "Divisor":
        return Divisor((p, k * c) for p, c in self._d.items())

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        return isinstance(other, Divisor) and self._d == other._d

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(tuple(self._d.items()))
        return self._hash

    def __repr__(self) -> str:
        if not self._d:
            return "Divisor(0)"
        return "Divisor(" + " + ".join(f"{c}*{p!r}" for p, c in self._d.items()) + ")"


def _crossings(xs_a, ys_a, xs_b, ys_b):
    """Offsets strictly inside common linear pieces where two PL maps cross."""
    grid = sorted(set(xs_a) | set(xs_b))
    out = []
    for lo, hi in zip(grid, grid[1:]):
        da0 = _interp(xs_a, ys_a, lo) - _interp(xs_b, ys_b, lo)
        da1 = _interp(xs_a, ys_a, hi) - _interp(xs_b, ys_b, hi)
        if (da0 < 0 < da1) or (da1 < 0 < da0):
            out.append(lo + (hi - lo) * da0 / (da0 - da1))
    return out


def _interp(xs, ys, t):
    i = bisect_right(xs, t) - 1
    if i >= len(xs) - 1:
        return ys[-1]
    if xs[i] == t:
        return ys[i]
    return ys[i] + (ys[i + 1] - ys[i]) * (t - xs[i]) / (xs[i + 1] - xs[i])


def _simplify(xs, ys):
    """Drop interior breakpoints where the slope does not change."""
    keep_x, keep_y = [xs[0]], [ys[0]]
    for i in range(1, len(xs) - 1):
        s0 = (ys[i] - keep_y[-1]) / (xs[i] - keep_x[-1])
        s1 = (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i])
        if s0 != s1:
            keep_x.append(xs[i])
            keep_y.append(ys[i])
    keep_x.append(xs[-1])
    keep_y.append(ys[-1])
    return tuple(keep_x), tuple(keep_y)


class PLFunction:
    """Continuous piecewise linear function with integer slopes.

    Per edge, the function is given by breakpoint offsets (including 0 and
    the edge length) and the values there.  Construction validates slope
    integrality and continuity at vertices.
    """

    __slots__ = ("graph", "_xs", "_ys", "_key")

    def __init__(self, graph: MetricGraph, breakpoints: Mapping[str, Iterable], check: bool = True):
        self.graph = graph
        self._xs: dict[str, tuple] = {}
        self._ys: dict[str, tuple] = {}
        self._key = None
        for e in graph.edges:
            if e.id not in breakpoints:
                raise InvalidInput(f"function has no data on edge {e.id!r}")
            pts = sorted((as_fraction(x), as_fraction(y)) for x, y in breakpoints[e.id])
            xs = [p[0] for p in pts]
            ys = [p[1] for p in pts]
            if not xs or xs[0] != 0 or xs[-1] != e.length or len(set(xs)) != len(xs) or len(xs) < 2:
                raise InvalidInput(f"breakpoints on edge {e.id!r} must start at 0, end at its "
                                   "length and be distinct")
            xs, ys = _simplify(xs, ys)
            if check:
                for i in range(len(xs) - 1):
                    s = (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i])
                    if s.denominator != 1:
                        raise NonIntegralSlope(f"slope {s} on edge {e.id!r}")
            self._xs[e.id] = xs
            self._ys[e.id] = ys
        if check:
            for v in graph.vertices:
                vals = {self._ys[eid][0 if end == 0 else -1] for eid, end in graph.incident(v)}
                if len(vals) > 1:
                    raise InvalidInput(f"function is discontinuous at vertex {v!r}")

    # -- constructors ------------------------------------------------------
    @classmethod
    def constant(cls, graph: MetricGraph, c=0) -> "PLFunction":
        c = as_fraction(c)
        return cls(graph, {e.id: [(0, c), (e.length, c)] for e in graph.edges}, check=False)

    @classmethod
    def from_vertex_values(cls, graph: MetricGraph, values: Mapping[str, Fraction]) -> "PLFunction":
        """Function that is affine on every edge of the model."""
        return cls(graph, {e.id: [(0, values[e.tail]), (e.length, values[e.head])]
                           for e in graph.edges})

    # -- evaluation --------------------------------------------------------
    def breakpoints(self, eid: str) -> list[tuple[Fraction, Fraction]]:
        return list(zip(self._xs[eid], self._ys[eid]))

    def offsets(self, eid: str) -> tuple:
        return self._xs[eid]

    def on_edge(self, eid: str, t) -> Fraction:
        return _interp(self._xs[eid], self._ys[eid], as_fraction(t))

    def vertex_value(self, v: str) -> Fraction:
        eid, end = self.graph.incident(v)[0] if self.graph.incident(v) else (None, 0)
        if eid is None:
            return Fraction(0)
        return self._ys[eid][0 if end == 0 else -1]

    def __call__(self, p: GraphPoint) -> Fraction:
        if p.is_vertex:
            return self.vertex_value(p.ident)
        return self.on_edge(p.ident, p.offset)

    def slopes(self, eid: str) -> list[Fraction]:
        xs, ys = self._xs[eid], self._ys[eid]
        return [(ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i]) for i in range(len(xs) - 1)]

    def slope_sequence(self, eid: str) -> tuple[int, ...]:
        return tuple(int(s) for s in self.slopes(eid))

    def outgoing_slope(self, eid: str, t: Fraction, sign: int) -> Fraction:
        xs, ys = self._xs[eid], self._ys[eid]
        if sign > 0:
            i = bisect_right(xs, t) - 1
            return (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i])
        i = bisect_right(xs, t) - 1
        if xs[i] == t:
            i -= 1
        return -(ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i])

    def order_at(self, p: GraphPoint) -> int:
        return int(sum(self.outgoing_slope(d.edge, d.offset, d.sign)
                       for d in self.graph.directions(p)))

    def corner_points(self) -> list[GraphPoint]:
        """Interior breakpoints (where the slope changes)."""
        pts = []
        for eid, xs in self._xs.items():
            pts.extend(GraphPoint("e", eid, t) for t in xs[1:-1])
        return pts

    def principal_divisor(self) -> "Divisor":
        g = self.graph
        pts = [g.vertex_point(v) for v in g.vertices] + self.corner_points()
        return Divisor((p, self.order_at(p)) for p in pts)

    def values_on(self, points) -> set:
        return {self(p) for p in points}

    @property
    def max_value(self) -> Fraction:
        return max(max(ys) for ys in self._ys.values()) if self._ys else Fraction(0)

    @property
    def min_value(self) -> Fraction:
        return min(min(ys) for ys in self._ys.values()) if self._ys else Fraction(0)

    # -- arithmetic --------------------------------------------------------
    def _combine(self, other: "PLFunction", op: Callable, crossings: bool, check=True):
        data = {}
        for e in self.graph.edges:
            xa, ya = self._xs[e.id], self._ys[e.id]
            xb, yb = other._xs[e.id], other._ys[e.id]
            grid = set(xa) | set(xb)
            if crossings:
                grid.update(_crossings(xa, ya, xb, yb))
            grid = sorted(grid)
            data[e.id] = [(t, op(_interp(xa, ya, t), _interp(xb, yb, t))) for t in grid]
        return PLFunction(self.graph, data, check=check)

    def __add__(self, other):
        if isinstance(other, PLFunction):
            return self._combine(other, lambda a, b: a + b, False)
        c = as_fraction(other)
        return self._map_values(lambda y: y + c)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, PLFunction):
            return self._combine(other, lambda a, b: a - b, False)
        c = as_fraction(other)
        return self._map_values(lambda y: y - c)

    def __neg__(self):
        return self._map_values(lambda y: -y)

    def scaled(self, k) -> "PLFunction":
        """Ordinary scalar multiple; integrality is checked."""
        k = as_fraction(k)
        return PLFunction(self.graph, {eid: [(x, k * y) for x, y in self.breakpoints(eid)]
                                       for eid in self._xs})

    def _map_values(self, fn):
        return PLFunction(self.graph, {eid: [(x, fn(y)) for x, y in self.breakpoints(eid)]
                                       for eid in self._xs}, check=False)

    def tmax(self, other: "PLFunction") -> "PLFunction":
        return self._combine(other, max, True)

    def tmin(self, other: "PLFunction") -> "PLFunction":
        return self._combine(other, min, True)

    def clip_below(self, c) -> "PLFunction":
        """Pointwise ``max(c, f)``."""
        return self.tmax(PLFunction.constant(self.graph, c))

    def clip_above(self, c) -> "PLFunction":
        """Pointwise ``min(c, f)``."""
        return self.tmin(PLFunction.constant(self.graph, c))

    # -- comparison --------------------------------------------------------
    def normalized(self) -> "PLFunction":
        """Translate so the lexicographically least vertex has value 0."""
        return self - self.vertex_value(min(self.graph.vertices))

    def key(self):
        if self._key is None:
            self._key = tuple((eid, self._xs[eid], self._ys[eid]) for eid in sorted(self._xs))
        return self._key

    def __eq__(self, other) -> bool:
        return isinstance(other, PLFunction) and self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def equal_mod_constants(self, other: "PLFunction") -> bool:
        return self.normalized() == other.normalized()

    def is_constant(self) -> bool:
        return self.max_value == self.min_value

    def __repr__(self) -> str:
        parts = [f"{eid}:{list(zip(map(str, xs), map(str, self._ys[eid])))}"
                 for eid, xs in self._xs.items()]
        return "PLFunction(" + "; ".join(parts) + ")"


def tropical_sum(functions: Iterable[PLFunction]) -> PLFunction:
    """Pointwise maximum."""
    it = iter(functions)
    acc = next(it)
    for f in it:
        acc = acc.tmax(f)
    return acc

import os
import random
from fractions import Fraction

import pytest
from hypothesis import settings

from tropsys.functions import Divisor
from tropsys.graph import MetricGraph, graph_from_edges

settings.register_profile("default", deadline=None, max_examples=40)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def k4(lengths=None) -> MetricGraph:
    return graph_from_edges([("v1", "v2"), ("v1", "v3"), ("v1", "v4"),
                             ("v2", "v3"), ("v2", "v4"), ("v3", "v4")], lengths)


def circle(length=1) -> MetricGraph:
    return graph_from_edges([("v", "v")], [length])


def banana(g=2) -> MetricGraph:
    return graph_from_edges([("v1", "v2")] * (g + 1))


def segment(length=1) -> MetricGraph:
    return graph_from_edges([("v1", "v2")], [length])


def prism() -> MetricGraph:
    return graph_from_edges([("a1", "a2"), ("a2", "a3"), ("a1", "a3"),
                             ("b1", "b2"), ("b2", "b3"), ("b1", "b3"),
                             ("a1", "b1"), ("a2", "b2"), ("a3", "b3")])


def edge_between(G, a, b):
    return next(e for e in G.edges if {e.tail, e.head} == {a, b})


def midpoint(G, a, b):
    e = edge_between(G, a, b)
    return G.point(e.id, e.length / 2)


def vdiv(G, **coeffs) -> Divisor:
    return Divisor({G.vertex_point(v): c for v, c in coeffs.items()})


def random_graph(rng: random.Random, max_v=5, max_e=8, max_len=3, loops=True) -> MetricGraph:
    """Connected multigraph with integer lengths."""
    n = rng.randint(1, max_v)
    names = [f"v{i}" for i in range(n)]
    edges = [(names[rng.randrange(i)], names[i]) for i in range(1, n)]
    while len(edges) < max(rng.randint(n - 1, max_e), 1):
        a, b = rng.choice(names), rng.choice(names)
        if a == b and not loops:
            continue
        edges.append((a, b))
    return graph_from_edges(edges, [rng.randint(1, max_len) for _ in edges])


@pytest.fixture
def K4():
    return k4()


def random_function(rng: random.Random, G: MetricGraph, q=2, spread=3):
    """Random PLFunction with breakpoints on the 1/q grid and integer slopes."""
    from tropsys.functions import PLFunction

    vals = {v: Fraction(rng.randint(-spread * q, spread * q), q) for v in G.vertices}
    data = {}
    for e in G.edges:
        n = int(e.length * q)
        m = int((vals[e.head] - vals[e.tail]) * q)
        steps = [rng.randint(-spread, spread) for _ in range(n - 1)]
        steps.append(m - sum(steps))
        y = vals[e.tail]
        pts = [(Fraction(0), y)]
        for j, s in enumerate(steps, 1):
            y += Fraction(s, q)
            pts.append((Fraction(j, q), y))
        data[e.id] = pts
    return PLFunction(G, data)

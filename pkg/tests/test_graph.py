from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from tropsys.errors import DisconnectedGraph, InvalidInput, NonIntegralLengths, NonpositiveLength
from tropsys.graph import (ClosedSubgraph, build_graph, coarsest_model, components_minus,
                           count_components_minus, graph_from_edges, integer_scale_factor,
                           is_smooth_cut_set, scale, subdivide, subdivision_point,
                           subdivision_vertex)

from conftest import banana, circle, k4, midpoint, random_graph


def test_build_k4():
    G = build_graph({"vertices": ["a", "b", "c", "d"],
                     "edges": [{"id": f"e{i}", "ends": list(p), "length": "1/1"}
                               for i, p in enumerate(["ab", "ac", "ad", "bc", "bd", "cd"])]})
    assert len(G.vertices) == 4 and len(G.edges) == 6
    assert G.genus == 3


def test_build_loop_circle():
    G = build_graph({"vertices": ["v"], "edges": [{"id": "e", "ends": ["v", "v"], "length": "1"}]})
    assert G.genus == 1
    assert G.valence(G.vertex_point("v")) == 2


def test_build_rejects_bad_input():
    with pytest.raises(DisconnectedGraph):
        build_graph({"vertices": ["a", "b"], "edges": []})
    with pytest.raises(NonpositiveLength):
        build_graph({"vertices": ["a", "b"], "edges": [{"ends": ["a", "b"], "length": "0"}]})
    with pytest.raises(InvalidInput):
        build_graph({"vertices": ["a"], "edges": [{"ends": ["a"]}]})
    with pytest.raises(InvalidInput):
        build_graph({"edges": []})


def test_points_are_canonical():
    G = k4()
    e = G.edges[0]
    assert G.point(e.id, 0) == G.vertex_point(e.tail)
    assert G.point(e.id, e.length) == G.vertex_point(e.head)
    p = G.point(e.id, Fraction(1, 3))
    assert not p.is_vertex and G.valence(p) == 2 and G.smooth(p)
    assert G.valence(G.vertex_point("v1")) == 3


def test_coarsest_model_suppresses_valence_two():
    G = subdivide(k4(), 2)
    cm = coarsest_model(G)
    assert len(cm.graph.vertices) == 4 and len(cm.graph.edges) == 6 and cm.unique
    path = graph_from_edges([("a", "b"), ("b", "c")], [1, 2])
    cp = coarsest_model(path)
    assert len(cp.graph.edges) == 1 and cp.graph.edges[0].length == 3


def test_coarsest_model_of_circle_is_flagged():
    c3 = graph_from_edges([("a", "b"), ("b", "c"), ("c", "a")])
    cm = coarsest_model(c3)
    assert not cm.unique
    assert cm.graph.vertices == ("a",) and len(cm.graph.edges) == 1
    assert cm.graph.total_length == 3


def test_subdivide_counts():
    C3 = subdivide(circle(1), 3)
    assert len(C3.vertices) == 3 and len(C3.edges) == 3
    assert all(e.length == Fraction(1, 3) for e in C3.edges)
    G = k4()
    assert subdivide(G, 1) == G
    # 2 + 3 * (k - 1) vertices and 3k edges
    B2 = subdivide(banana(), 2)
    assert len(B2.vertices) == 5 and len(B2.edges) == 6
    with pytest.raises(NonIntegralLengths):
        subdivide(graph_from_edges([("a", "b")], [Fraction(1, 2)]), 2)


def test_subdivision_vertex_roundtrip():
    G = banana()
    for eid in G.edge_ids:
        for j in range(5):
            p = G.point(eid, Fraction(j, 4))
            v = subdivision_vertex(G, p, 4)
            assert subdivision_point(G, v, 4) == p


def test_components_minus_examples():
    C = circle(1)
    assert count_components_minus(C, [C.point("e0", Fraction(1, 2))]) == 1
    assert count_components_minus(C, [C.point("e0", Fraction(1, 3)),
                                      C.point("e0", Fraction(2, 3))]) == 2
    G = k4()
    mids = [midpoint(G, "v1", w) for w in ("v2", "v3", "v4")]
    comps = components_minus(G, mids)
    assert len(comps) == 2
    assert sum(c.measure() for c in comps) == G.total_length


def test_smooth_cut_sets():
    C = circle(1)
    assert is_smooth_cut_set(C, [C.point("e0", Fraction(1, 3)), C.point("e0", Fraction(1, 2))])
    G = k4()
    assert not is_smooth_cut_set(G, [midpoint(G, "v1", "v2")])
    assert not is_smooth_cut_set(G, [G.vertex_point(v) for v in G.vertices])


def test_closed_subgraph_boundary():
    G = k4()
    A = ClosedSubgraph.from_subcomplex(G, ["v1", "v2"], ["e0"])
    assert sorted(A.boundary(G)) == [G.vertex_point("v1"), G.vertex_point("v2")]
    assert A.measure() == 1 and not A.is_whole(G)


def test_scaling():
    G = graph_from_edges([("a", "b"), ("b", "c")], [Fraction(1, 2), Fraction(2, 3)])
    k = integer_scale_factor(G)
    assert k == 6
    assert [e.length for e in scale(G, k).edges] == [3, 4]


@given(st.randoms(use_true_random=False), st.integers(1, 3))
def test_subdivision_invariants(rng, k):
    G = random_graph(rng)
    H = subdivide(G, k)
    assert H.genus == G.genus
    assert H.total_length == G.total_length
    cm = coarsest_model(H).graph
    assert cm.genus == G.genus and cm.total_length == G.total_length
    big = lambda X: sorted(X.degree(v) for v in X.vertices if X.degree(v) != 2)
    assert big(cm) == big(G) or G.genus == 1 and not big(G)


@given(st.randoms(use_true_random=False), st.integers(1, 3))
def test_smooth_cut_model_independent(rng, k):
    G = random_graph(rng)
    pts = []
    for e in rng.sample(list(G.edges), min(3, len(G.edges))):
        pts.append(G.point(e.id, e.length * Fraction(rng.randint(1, 5), 6)))
    H = subdivide(G, k)
    moved = [H.point(*_locate(G, H, k, p)) if not p.is_vertex else p for p in pts]
    assert is_smooth_cut_set(G, pts) == is_smooth_cut_set(H, moved)


def _locate(G, H, k, p):
    """Edge of the level-k model containing ``p`` and the offset on it."""
    e = G.edge(p.ident)
    n = int(e.length * k)
    j = int(p.offset * k)
    if n == 1:
        return e.id, p.offset
    return f"{e.id}#{j}", p.offset - Fraction(j, k)

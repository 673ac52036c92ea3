import itertools
import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from tropsys.divisors import (can_fire, canonical_divisor, chip_firing_function,
                              decompose_function, decompose_weighted_move, is_linearly_equivalent,
                              order_at, principal_divisor, q_reduce, rank, sum_functions,
                              tropical_combine, weighted_move)
from tropsys.errors import EmptySubgraph, InvalidInput
from tropsys.finite import FiniteModel
from tropsys.functions import Divisor, PLFunction
from tropsys.graph import ClosedSubgraph, graph_from_edges, subdivide

from conftest import banana, circle, k4, midpoint, random_function, random_graph, segment, vdiv


def test_canonical_divisor():
    G = k4()
    K = canonical_divisor(G)
    assert K == vdiv(G, v1=1, v2=1, v3=1, v4=1) and K.degree == 2 * G.genus - 2
    assert len(canonical_divisor(circle())) == 0
    B = banana()
    assert canonical_divisor(B) == vdiv(B, v1=1, v2=1)


def test_order_and_principal_of_constant():
    G = k4()
    c = PLFunction.constant(G, 2)
    assert order_at(c, G.vertex_point("v1")) == 0
    assert len(principal_divisor(c)) == 0


def test_tropical_combine_identity_and_absorption():
    G = k4()
    f = PLFunction.from_vertex_values(G, {"v1": 1, "v2": 0, "v3": 0, "v4": 2})
    assert tropical_combine([(0, f)]) == f
    assert tropical_combine([(0, f), (-3, f)]) == f


def test_chip_firing_function_examples():
    C = circle(1)
    v = ClosedSubgraph.from_points(C, [C.vertex_point("v")])
    f = chip_firing_function(C, v, Fraction(1, 4))
    assert f.min_value == Fraction(-1, 4) and f(C.vertex_point("v")) == 0
    assert principal_divisor(f) == Divisor({C.vertex_point("v"): -2,
                                            C.point("e0", Fraction(1, 4)): 1,
                                            C.point("e0", Fraction(3, 4)): 1})
    G = k4()
    g = chip_firing_function(G, ClosedSubgraph.from_points(G, [G.vertex_point("v1")]), Fraction(1, 2))
    want = Divisor({G.vertex_point("v1"): -3}) + Divisor.from_points(
        [midpoint(G, "v1", w) for w in ("v2", "v3", "v4")])
    assert principal_divisor(g) == want
    with pytest.raises(EmptySubgraph):
        chip_firing_function(G, ClosedSubgraph.make(G), 1)
    with pytest.raises(InvalidInput):
        chip_firing_function(G, ClosedSubgraph.from_subcomplex(G, G.vertices, G.edge_ids), 1)


def test_can_fire_examples():
    G = k4()
    tri = ClosedSubgraph.from_subcomplex(G, ["v1", "v2", "v3"], ["e0", "e1", "e3"])
    assert can_fire(G, Divisor(), tri) is None
    l = can_fire(G, canonical_divisor(G), tri)
    assert l is not None and l > 0
    B = banana()
    assert can_fire(B, vdiv(B, v1=1, v2=1), ClosedSubgraph.from_points(B, [B.vertex_point("v1")])) is None


def test_decompose_weighted_move_lcm():
    # two parallel edges, slopes 2 and 3 from v1 (low) to v2 (high): lengths 3 and 2
    G = graph_from_edges([("v1", "v2"), ("v1", "v2")], [3, 2])
    f = PLFunction(G, {"e0": [(0, 0), (3, 6)], "e1": [(0, 0), (2, 6)]})
    m = weighted_move(f)
    parts = decompose_weighted_move(m)
    assert len(parts) == 6
    assert sum_functions(parts, G) + f.max_value == f


def test_decompose_single_slope_two():
    G = segment(2)
    f = PLFunction(G, {"e0": [(0, 0), (1, 2), (2, 2)]})
    parts = decompose_weighted_move(weighted_move(f))
    assert len(parts) == 2
    assert all(p.min_value == -1 for p in parts)
    assert sum_functions(parts, G) + 2 == f


def test_decompose_trivial_cases():
    G = k4()
    assert decompose_function(PLFunction.constant(G, 1)) == []
    f = PLFunction.from_vertex_values(G, {"v1": 0, "v2": 1, "v3": 1, "v4": 1})
    moves = decompose_function(f)
    assert len(moves) == 1 and moves[0].function == f
    assert len(decompose_weighted_move(moves[0])) == 1


@given(st.randoms(use_true_random=False))
def test_decomposition_reassembles(rng):
    G = random_graph(rng, max_v=4, max_e=5, max_len=2)
    f = random_function(rng, G)
    moves = decompose_function(f)
    total = sum_functions([m.function for m in moves], G)
    assert (total - f).is_constant()
    simple = [g for m in moves for g in decompose_weighted_move(m)]
    assert (sum_functions(simple, G) - f).is_constant()
    assert all(set(map(abs, g.slopes(e))) <= {0, 1} for g in simple for e in G.edge_ids)


# -- reduction, equivalence and rank --------------------------------------------------

def _superstable_bruteforce(M: FiniteModel, x, q) -> bool:
    """No nonempty S avoiding q can fire: some v in S has fewer chips than edges leaving S."""
    others = [i for i in range(M.n) if i != q]
    for r in range(1, len(others) + 1):
        for S in itertools.combinations(others, r):
            S = set(S)
            if all(x[v] >= sum(M.A[v, w] for w in range(M.n) if w not in S) for v in S):
                return False
    return True


def _equivalent_sympy(M: FiniteModel, x, y) -> bool:
    L = sympy.Matrix(M.laplacian.tolist())[1:, 1:]
    d = sympy.Matrix([int(a - b) for a, b in zip(y, x)])
    if sum(d) != 0:
        return False
    z = L.LUsolve(d[1:, :])
    return all(c.is_integer for c in z)


@pytest.mark.parametrize("G,D,q", [
    (subdivide(circle(1), 3), {"v": 3}, "e0#1"),
    (k4(), {"v1": 1, "v2": 1, "v3": 1, "v4": 1}, "v1"),
    (banana(), {"v1": 3, "v2": -1}, "v2"),
])
def test_q_reduce_against_bruteforce(G, D, q):
    D = vdiv(G, **D) if all(k.isidentifier() for k in D) else Divisor({G.vertex_point(k): c for k, c in D.items()})
    R = q_reduce(G, D, q)
    M = FiniteModel(G)
    x, r = M.vector(D), M.vector(R)
    assert _equivalent_sympy(M, x, r)
    assert all(r[i] >= 0 for i in range(M.n) if i != M.index[q])
    assert _superstable_bruteforce(M, r, M.index[q])
    assert q_reduce(G, R, q) == R


def test_q_reduce_circle_three_chips():
    C3 = subdivide(circle(1), 3)
    D = Divisor({C3.vertex_point("v"): 3})
    assert q_reduce(C3, D, "e0#1") == Divisor({C3.vertex_point("e0#1"): 3})


@given(st.randoms(use_true_random=False))
def test_q_reduce_class_invariant(rng):
    G = random_graph(rng, max_v=4, max_e=6, max_len=1)
    M = FiniteModel(G)
    x = [rng.randint(-2, 3) for _ in range(M.n)]
    D = M.divisor(x)
    z = [rng.randint(-2, 2) for _ in range(M.n)]
    E = M.divisor([a - b for a, b in zip(x, M.laplacian @ z)])
    q = rng.choice(G.vertices)
    assert q_reduce(G, D, q) == q_reduce(G, E, q)


def test_linear_equivalence_examples():
    C = circle(3)
    p = lambda t: C.point("e0", t)
    D3 = Divisor({p(0): 3})
    D = Divisor.from_points([p(0), p(1), p(2)])
    f = is_linearly_equivalent(C, D, D3)
    assert f is not None and D + principal_divisor(f) == D3
    assert is_linearly_equivalent(C, D, D).is_constant()
    C1 = circle(1)
    assert is_linearly_equivalent(C1, Divisor({C1.vertex_point("v"): 1}),
                                  Divisor({C1.point("e0", Fraction(1, 3)): 1})) is None
    assert is_linearly_equivalent(C1, Divisor({C1.vertex_point("v"): 1}), Divisor()) is None


def test_rank_examples():
    C = circle(1)
    assert rank(C, Divisor({C.vertex_point("v"): -1})) == -1
    assert rank(C, Divisor({C.vertex_point("v"): 2})) == 1
    G = k4()
    assert rank(G, canonical_divisor(G)) == 2
    B = banana()
    assert rank(B, vdiv(B, v1=1, v2=1)) == 1
    assert rank(B, vdiv(B, v1=2)) == 0  # K - 2 v1 = v2 - v1 is not principal


def _random_divisor(rng, G, maxdeg=6):
    pts = [G.vertex_point(v) for v in G.vertices]
    for e in G.edges:
        pts.append(G.point(e.id, e.length / 2))
    D = Divisor()
    for _ in range(rng.randint(1, 4)):
        D = D + Divisor({rng.choice(pts): rng.randint(-2, 3)})
    return D if abs(D.degree) <= maxdeg else Divisor({pts[0]: 1})


@given(st.randoms(use_true_random=False))
def test_riemann_roch(rng):
    G = random_graph(rng, max_v=4, max_e=5, max_len=2)
    D = _random_divisor(rng, G)
    K = canonical_divisor(G)
    assert rank(G, D) - rank(G, K - D) == D.degree + 1 - G.genus

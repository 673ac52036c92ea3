"""End-to-end acceptance checks, one test per criterion.

Each test prints a single ``[NN] PASS|FAIL  title  detail`` line to the
terminal (also under pytest's output capture).  Run as a script to get
just those lines.
"""

import random
import time
from fractions import Fraction
from math import comb

import networkx as nx
import pytest

from tropsys.divisors import (canonical_divisor, decompose_function, decompose_weighted_move,
                              is_linearly_equivalent, rank, sum_functions)
from tropsys.embedding import balance, curve_degree, is_hyperelliptic, is_very_ample
from tropsys.errors import NonIntegralSlope
from tropsys.functions import Divisor
from tropsys.graph import graph_from_edges, subdivide
from tropsys.linear_system import (LinearSystem, enumerate_cells, extremals, generating_set,
                                   link_fine_subdivision, random_element)
from tropsys.matroid import bergman_complex, cographic_matroid, link_contains_bergman
from tropsys.picard import critical_group, emulate_vertex_firing, superstables, transition_map

from conftest import banana, circle, k4, midpoint, prism, random_function, random_graph, segment, vdiv


def report(n, title, check, capsys=None):
    try:
        detail = check()
        ok = True
    except AssertionError as exc:
        ok, detail = False, str(exc).splitlines()[0] if str(exc) else "assertion failed"
    line = f"[{n:02d}] {'PASS' if ok else 'FAIL'}  {title}  {detail or ''}".rstrip()
    if capsys is not None:
        with capsys.disabled():
            print("\n" + line)
    else:
        print(line)
    assert ok, line


def spanning_trees(G) -> int:
    H = nx.MultiGraph()
    H.add_nodes_from(G.vertices)
    H.add_edges_from((e.tail, e.head) for e in G.edges if not e.is_loop)
    return round(nx.number_of_spanning_trees(H)) if H.number_of_nodes() > 1 else 1


def smooth_degree_two(g: nx.Graph) -> nx.Graph:
    g = nx.MultiGraph(g)
    for v in [v for v in g if g.degree(v) == 2]:
        nb = list(g.neighbors(v))
        if len(set(nb)) == 2:
            g.remove_node(v)
            g.add_edge(*nb)
    return nx.Graph(g)


def ample_instance(rng):
    """Random small graph of genus <= 1 with a vertex divisor of degree >= 2g + 1."""
    while True:
        G = random_graph(rng, max_v=3, max_e=3, max_len=1)
        if G.genus <= 1:
            break
    vs = sorted(G.vertices)
    terms = {}
    for _ in range(2 * G.genus + 1 + rng.randint(0, 1)):
        v = rng.choice(vs)
        terms[v] = terms.get(v, 0) + 1
    return G, vdiv(G, **terms)


# -- checks ------------------------------------------------------------------------

def check_k4_generators():
    G = k4()
    t = time.perf_counter()
    gens = generating_set(G, canonical_divisor(G))
    ext = extremals(G, canonical_divisor(G))
    dt = time.perf_counter() - t
    assert (len(gens), len(ext)) == (14, 7), f"got {len(gens)} generators, {len(ext)} extremals"
    assert dt < 10, f"took {dt:.1f}s"
    return f"14 generators, 7 extremals in {dt:.2f}s"


def check_k4_cells():
    G = k4()
    cx = enumerate_cells(G, canonical_divisor(G))
    sizes = sorted(len(c.vertices) for c in cx.maximal_cells())
    n0 = len(cx.of_dimension(0))
    assert n0 == 14, f"{n0} vertices"
    assert sizes == [3] * 12 + [4] * 3, f"maximal cell sizes {sizes}"
    return "14 vertices, 12 triangles + 3 quadrangles"


def check_petersen_link():
    runs = []
    for L in ([1] * 6, [Fraction(1, 2), Fraction(2, 3), 1, Fraction(3, 2), 2, Fraction(5, 4)]):
        G = k4(L)
        runs.append(link_fine_subdivision(G, canonical_divisor(G)).one_skeleton())
    for sk in runs:
        assert nx.is_isomorphic(smooth_degree_two(sk), nx.petersen_graph()), "not a subdivided Petersen graph"
    assert nx.is_isomorphic(*runs), "the two runs differ"
    return f"1-skeleton {runs[0].number_of_nodes()} nodes / {runs[0].number_of_edges()} edges, smooths to Petersen"


def check_circle_f_vectors():
    t = time.perf_counter()
    G = circle(1)
    cx = enumerate_cells(G, vdiv(G, v=3))
    assert cx.f_vector == [4, 5, 2], f"3v gives {cx.f_vector}"
    for d in range(3, 7):
        D = vdiv(G, v=d)
        cx = enumerate_cells(G, D)
        cone = next(c.index for c in cx.cells if c.dimension == 0 and c.divisor == D)
        counts = [0] * (d - 1)
        for c in cx.cells:
            if c.index != cone and cone not in c.vertices:
                counts[c.dimension] += 1
        expect = [(i + 1) * comb(d, i + 2) for i in range(d - 1)]
        assert counts == expect, f"d={d}: {counts} != {expect}"
    dt = time.perf_counter() - t
    assert dt < 30, f"took {dt:.1f}s"
    return f"(4,5,2) and d=3..6 non-cone counts in {dt:.1f}s"


def check_segment_simplex():
    S = segment(1)
    for d in range(1, 6):
        cx = enumerate_cells(S, vdiv(S, v2=d))
        expect = [comb(d + 1, i + 1) for i in range(d + 1)]
        assert cx.f_vector == expect, f"d={d}: f={cx.f_vector}"
        top = cx.maximal_cells()
        assert len(top) == 1 and len(top[0].vertices) == d + 1, f"d={d}: not a single simplex"
    return "d = 1..5"


def check_riemann_roch():
    rng = random.Random(20240601)
    t = time.perf_counter()
    n = 0
    while n < 24:
        G = random_graph(rng, max_v=5, max_e=8, max_len=3)
        pts = [G.vertex_point(v) for v in G.vertices] + [G.point(e.id, e.length / 2) for e in G.edges]
        D = Divisor()
        for _ in range(rng.randint(1, 4)):
            D = D + Divisor({rng.choice(pts): rng.randint(-2, 3)})
        if abs(D.degree) > 6:
            continue
        K = canonical_divisor(G)
        lhs = rank(G, D) - rank(G, K - D)
        assert lhs == D.degree + 1 - G.genus, f"fails for {D!r} on genus {G.genus}"
        n += 1
    dt = time.perf_counter() - t
    assert dt < 120, f"took {dt:.1f}s"
    return f"{n} random cases in {dt:.1f}s"


def check_curve_degree():
    rng = random.Random(7)
    for _ in range(20):
        G, D = ample_instance(rng)
        C = balance(G, generating_set(G, D).functions, D)
        assert curve_degree(C) == D.degree, f"degree {curve_degree(C)} != {D.degree}"
    # tropical line
    T = graph_from_edges([("c", "a1"), ("c", "a2"), ("c", "a3")])
    D = vdiv(T, c=1)
    F = [is_linearly_equivalent(T, D, vdiv(T, **{f"a{i}": 1})) for i in (1, 2, 3)]
    assert curve_degree(balance(T, F, D)) == 1, "tropical line"
    # simplex embedding of K4
    G = k4()
    K = canonical_divisor(G)
    F = [is_linearly_equivalent(G, K, vdiv(G, **{f"v{i}": 4})) for i in range(1, 5)]
    d = curve_degree(balance(G, F, K))
    assert d == K.degree == 4, f"simplex degree {d}"
    # nonample example
    u = [midpoint(G, f"v{i}", "v4") for i in (1, 2, 3)]
    V = G.vertex_point
    T3 = [Divisor({u[0]: 2, V("v2"): 1, V("v3"): 1}), Divisor({u[1]: 2, V("v1"): 1, V("v3"): 1}),
          Divisor({u[2]: 2, V("v1"): 1, V("v2"): 1})]
    F = [is_linearly_equivalent(G, K, t) for t in T3]
    assert curve_degree(balance(G, F, K)) == 4, "nonample example"
    return "20 random + line (1), K4 simplex (deg K = 4), nonample (4)"


def check_very_ample():
    rng = random.Random(11)
    for _ in range(10):
        G, D = ample_instance(rng)
        assert is_very_ample(G, D, check_extremal=False), f"deg {D.degree} on genus {G.genus} not very ample"
    B = banana()
    res = is_very_ample(B, canonical_divisor(B))
    assert not res, "banana K is very ample"
    hyp = is_hyperelliptic(B)
    assert hyp.witness == vdiv(B, v1=1, v2=1), f"witness {hyp.witness!r}"
    return "10 random; banana K collides, witness v1+v2"


def check_critical_groups():
    for k in range(2, 9):
        C = graph_from_edges([(f"u{i}", f"u{(i + 1) % k}") for i in range(k)])
        grp = critical_group(C)
        assert grp.invariant_factors == [k], f"C_{k}: {grp.invariant_factors}"
        assert grp.order == spanning_trees(C)
    for k in range(1, 5):
        Bk = subdivide(banana(), k + 1)
        grp = critical_group(Bk, level=k + 1)
        assert grp.invariant_factors == [k + 1, 3 * k + 3], f"banana k={k}: {grp.invariant_factors}"
        assert grp.order == spanning_trees(Bk)
    for G in (k4(), prism(), graph_from_edges([("a", "b"), ("b", "c")])):
        assert critical_group(G, with_representatives=False).order == spanning_trees(G)
    return "C_2..C_8, banana k=1..4, tree counts agree"


def check_transition_maps():
    G = banana()
    for c in superstables(G, "v1"):
        direct = transition_map(G, c, 1, 4, "v1")
        assert direct == transition_map(G, transition_map(G, c, 1, 2, "v1"), 2, 4, "v1"), "psi composition"
    C3 = graph_from_edges([("a", "b"), ("b", "c"), ("a", "c")])
    _, res = emulate_vertex_firing(C3, 1, 2, "a", {"a": 2})
    assert res == {"b": 1, "c": 1}, f"C_3 -> C_6 gives {res}"
    _, res = emulate_vertex_firing(G, 1, 2, "v1", {"v1": 3})
    assert res == {"v2": 3}, f"banana gives {res}"
    return "psi_(1,4) = psi_(2,4) psi_(1,2); emulation on C_3 and banana"


def check_decomposition():
    rng = random.Random(99)
    weighted = 0
    for _ in range(100):
        G = random_graph(rng, max_v=4, max_e=5, max_len=2)
        # small slope spread keeps the lcm, hence the number of simple moves, modest
        f = random_function(rng, G, spread=1)
        weighted += any(abs(s) > 1 for e in G.edges for s in f.slopes(e.id))
        moves = decompose_function(f)
        simple = [g for m in moves for g in decompose_weighted_move(m)]
        for parts in ([m.function for m in moves], simple):
            total = sum_functions(parts, G)
            diffs = {total(G.point(e.id, x)) - y for e in G.edges for x, y in f.breakpoints(e.id)}
            assert len(diffs) == 1, "reassembly differs from the input beyond a constant"
    assert weighted >= 20, f"only {weighted} functions with slopes beyond 1"
    return f"100 random functions, {weighted} with slopes beyond 1"


def check_bergman():
    G = k4()
    cert = link_contains_bergman(G, link_fine_subdivision(G, canonical_divisor(G)),
                                 bergman_complex(cographic_matroid(G)))
    assert cert["contained"] and cert["equal"], "K4 link differs from its Bergman complex"
    P = prism()
    cert = link_contains_bergman(P, link_fine_subdivision(P, canonical_divisor(P)),
                                 bergman_complex(cographic_matroid(P)))
    assert cert["contained"] and not cert["equal"] and cert["extra"], "prism containment not strict"
    return f"K4 equal; prism has {len(cert['extra'])} extra element(s)"


def check_semimodule():
    rng = random.Random(5)
    for _ in range(20):
        G = random_graph(rng, max_v=3, max_e=4)
        f, g, h = (random_function(rng, G) for _ in range(3))
        assert f.tmax(f) == f and f.tmax(g) == g.tmax(f), "idempotent / commutative"
        assert f.tmax(g).tmax(h) == f.tmax(g.tmax(h)), "associative"
    G = k4()
    K = canonical_divisor(G)
    eng = LinearSystem(G, K)
    pairs = 0
    while pairs < 50:
        f, g = random_element(eng, rng), random_element(eng, rng)
        if (f - g).is_constant():
            continue
        pairs += 1
        escaped = False
        for lam in (Fraction(1, 2), Fraction(1, 3), Fraction(2, 3), Fraction(1, 5)):
            try:
                mix = f.scaled(lam) + g.scaled(1 - lam)
            except NonIntegralSlope:
                escaped = True
                break
            if not (K + mix.principal_divisor()).is_effective():
                escaped = True
                break
        assert escaped, "an ordinary segment stayed inside R(K)"
    return "tmax laws on 20 samples; 50 pairs leave R(K)"


CRITERIA = [
    (1, "K4 generators and extremals", check_k4_generators),
    (2, "K4 cell complex", check_k4_cells),
    (3, "K4 link is a subdivided Petersen graph", check_petersen_link),
    (4, "circle f-vectors", check_circle_f_vectors),
    (5, "segment linear system is a simplex", check_segment_simplex),
    (6, "Riemann-Roch on random graphs", check_riemann_roch),
    (7, "degree of balanced images", check_curve_degree),
    (8, "very ampleness and hyperelliptic witness", check_very_ample),
    (9, "critical groups", check_critical_groups),
    (10, "transition maps and emulation", check_transition_maps),
    (11, "decomposition round trip", check_decomposition),
    (12, "link versus Bergman complex", check_bergman),
    (13, "semimodule laws and non-convexity", check_semimodule),
]


@pytest.mark.parametrize("n,title,check", CRITERIA, ids=[f"{n:02d}" for n, _, _ in CRITERIA])
def test_acceptance(n, title, check, capsys):
    report(n, title, check, capsys)


if __name__ == "__main__":
    import sys

    failed = 0
    for n, title, check in CRITERIA:
        try:
            report(n, title, check)
        except AssertionError:
            failed += 1
    sys.exit(1 if failed else 0)

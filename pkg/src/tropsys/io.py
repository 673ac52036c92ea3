"""JSON encoding of graphs, divisors, functions and computed records.

Every ``*_to_json`` returns plain JSON-ready data (rationals as ``"p/q"``
strings) and has a ``*_from_json`` partner that rebuilds an equal value.
Objects living on a graph need the graph to decode.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .embedding import EmbeddedCurve, Ray, Segment, TropicalProjectivePoint
from .errors import InvalidInput
from .functions import Divisor, PLFunction
from .graph import ClosedSubgraph, GraphPoint, MetricGraph, as_fraction, build_graph, format_fraction
from .linear_system import CellComplexRecord, CellRecord, FiringPosetElement, SimplicialComplex
from .picard import CriticalGroup, PicardClass

fmt = format_fraction


def dumps(data) -> str:
    """Deterministic JSON text."""
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


# -- graphs, points, divisors, functions ---------------------------------------------

def graph_to_json(G: MetricGraph) -> dict:
    return {"vertices": list(G.vertices),
            "edges": [{"id": e.id, "ends": [e.tail, e.head], "length": fmt(e.length)}
                      for e in G.edges]}


def graph_from_json(data) -> MetricGraph:
    return build_graph(data)


def point_to_json(p: GraphPoint) -> dict:
    if p.is_vertex:
        return {"vertex": p.ident}
    return {"edge": p.ident, "offset": fmt(p.offset)}


def point_from_json(G: MetricGraph, data) -> GraphPoint:
    try:
        if "vertex" in data:
            v = str(data["vertex"])
            if v not in G.vertices:
                raise InvalidInput(f"unknown vertex {v!r}")
            return G.vertex_point(v)
        eid = str(data["edge"])
        if eid not in G.edge_ids:
            raise InvalidInput(f"unknown edge {eid!r}")
        off = as_fraction(data["offset"])
        if not 0 <= off <= G.length(eid):
            raise InvalidInput(f"offset {off} outside edge {eid!r}")
        return G.point(eid, off)
    except (KeyError, TypeError) as exc:
        raise InvalidInput(f"malformed point {data!r}") from exc


def divisor_to_json(D: Divisor) -> list:
    return [dict(point_to_json(p), coeff=c) for p, c in D.items()]


def divisor_from_json(G: MetricGraph, data) -> Divisor:
    if not isinstance(data, list):
        raise InvalidInput("a divisor is a list of {point, coeff} records")
    terms = []
    for item in data:
        c = item.get("coeff") if isinstance(item, dict) else None
        if not isinstance(c, int) or isinstance(c, bool):
            raise InvalidInput(f"divisor entry {item!r} needs an integer coeff")
        terms.append((point_from_json(G, item), c))
    return Divisor(terms)


def function_to_json(f: PLFunction) -> dict:
    return {"edges": {eid: [[fmt(x), fmt(y)] for x, y in f.breakpoints(eid)]
                      for eid in f.graph.edge_ids}}


def function_from_json(G: MetricGraph, data) -> PLFunction:
    try:
        return PLFunction(G, {eid: [tuple(p) for p in pts] for eid, pts in data["edges"].items()})
    except (KeyError, TypeError, AttributeError) as exc:
        raise InvalidInput(f"malformed function: {exc}") from exc


# -- linear systems ---------------------------------------------------------------------

def _piece(p) -> list:
    return [p[0], fmt(p[1]), fmt(p[2])]


def cell_complex_to_json(cx: CellComplexRecord) -> dict:
    return {
        "pieces": [_piece(p) for p in cx.pieces],
        "f_vector": cx.f_vector,
        "cells": [{"index": c.index, "dimension": c.dimension,
                   "slopes": [list(s) for s in c.key],
                   "divisor": divisor_to_json(c.divisor),
                   "faces": list(c.faces), "vertices": list(c.vertices)} for c in cx.cells],
    }


def cell_complex_from_json(G: MetricGraph, data) -> CellComplexRecord:
    pieces = [(e, as_fraction(a), as_fraction(b)) for e, a, b in data["pieces"]]
    nodes = sorted({G.point(e, t) for e, a, b in pieces for t in (a, b)})
    cells = []
    for c in data["cells"]:
        key = tuple(tuple(s) for s in c["slopes"])
        P = divisor_from_json(G, c["divisor"])
        comps = {p: tuple(b - a for a, b in zip(s, s[1:])) for p, s in zip(pieces, key)}
        starts = {p: s[0] for p, s in zip(pieces, key)}
        d_v = {x: P[x] for x in nodes}
        cells.append(CellRecord(c["index"], key, c["dimension"], P, d_v, comps, starts,
                                list(c["faces"]), list(c["vertices"])))
    return CellComplexRecord(pieces, cells)


def subgraph_to_json(A: ClosedSubgraph) -> dict:
    return {"vertices": sorted(A.vertices),
            "intervals": {eid: [[fmt(a), fmt(b)] for a, b in lst] for eid, lst in A.intervals}}


def subgraph_from_json(G: MetricGraph, data) -> ClosedSubgraph:
    return ClosedSubgraph.make(G, data["vertices"], data["intervals"])


def poset_element_to_json(p: FiringPosetElement) -> dict:
    return {"subgraph": subgraph_to_json(p.subgraph),
            "germs": [[point_to_json(x), e, s, c] for x, e, s, c in p.germs]}


def poset_element_from_json(G: MetricGraph, data) -> FiringPosetElement:
    germs = tuple((point_from_json(G, x), e, s, c) for x, e, s, c in data["germs"])
    return FiringPosetElement(subgraph_from_json(G, data["subgraph"]), germs)


def poset_to_json(elements, less) -> dict:
    """Elements plus Hasse edges (covering pairs)."""
    n = len(elements)
    lt = [[less(elements[i], elements[j]) for j in range(n)] for i in range(n)]
    hasse = [[i, j] for i in range(n) for j in range(n)
             if lt[i][j] and not any(lt[i][k] and lt[k][j] for k in range(n))]
    return {"elements": [poset_element_to_json(p) for p in elements], "hasse": hasse}


def complex_to_json(K: SimplicialComplex, label=None) -> dict:
    label = label or (lambda v: v if isinstance(v, (str, int)) else repr(v))
    return {"vertices": [label(v) for v in K.vertices],
            "facets": [list(s) for s in K.facets()],
            "f_vector": K.f_vector()}


def complex_from_json(data, decode=None) -> SimplicialComplex:
    decode = decode or (lambda v: v)
    return SimplicialComplex([decode(v) for v in data["vertices"]],
                             [tuple(s) for s in data["facets"]])


# -- embedded curves --------------------------------------------------------------------

def tp_to_json(p: TropicalProjectivePoint) -> list:
    return [fmt(x) for x in p]


def curve_to_json(C: EmbeddedCurve, degree=None) -> dict:
    out = {"n": C.n,
           "segments": [{"start": tp_to_json(s.start), "end": tp_to_json(s.end),
                         "direction": list(s.direction), "multiplicity": s.multiplicity}
                        for s in C.segments],
           "rays": [{"base": tp_to_json(r.base), "direction": list(r.direction),
                     "multiplicity": r.multiplicity} for r in C.rays]}
    if degree is not None:
        out["degree"] = degree
    return out


def curve_from_json(data) -> EmbeddedCurve:
    segs = [Segment(TropicalProjectivePoint(s["start"]), TropicalProjectivePoint(s["end"]),
                    tuple(s["direction"]), s["multiplicity"]) for s in data["segments"]]
    rays = [Ray(TropicalProjectivePoint(r["base"]), tuple(r["direction"]), r["multiplicity"])
            for r in data["rays"]]
    return EmbeddedCurve(data["n"], segs, rays)


# -- Picard ---------------------------------------------------------------------------

def group_to_json(grp: CriticalGroup) -> dict:
    return grp.as_dict()


def group_from_json(data) -> CriticalGroup:
    return CriticalGroup(list(data["invariant_factors"]), data["order"],
                         data["base_vertex"], data["level"])


def class_to_json(c: PicardClass) -> dict:
    return {"level": c.level, "base_vertex": c.base_vertex,
            "representative": divisor_to_json(c.representative)}


def class_from_json(G: MetricGraph, data) -> PicardClass:
    return PicardClass(G, data["level"], divisor_from_json(G, data["representative"]),
                       data["base_vertex"])


def fractions_to_json(xs) -> list:
    return [fmt(Fraction(x)) for x in xs]

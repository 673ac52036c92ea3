"""Command-line front end.

Subcommands ``linsys``, ``embed`` and ``picard`` read a graph (and a
divisor) from JSON files and write one JSON document.  Exit codes: 0 ok,
2 invalid input, 3 an enumeration cap was hit, 4 a precondition failed.
"""

from __future__ import annotations

import argparse
import json
import sys
from . import io
from .errors import InvalidInput, TooLarge, TropsysError
from .graph import subdivide

EXIT_OK, EXIT_INVALID, EXIT_CAP, EXIT_PRECONDITION = 0, 2, 3, 4
DEFAULT_CAP = 100000


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_INVALID)


def _load(path, what):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise InvalidInput(f"cannot read {what} file {path!r}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"{what} file {path!r} is not valid JSON: {exc}") from exc


def _graph(args):
    G = io.graph_from_json(_load(args.graph, "graph"))
    if args.model_level and args.model_level > 1 and args.command != "picard":
        G = subdivide(G, args.model_level)
    return G


def _divisor(args, G):
    if not args.divisor:
        raise InvalidInput("--divisor is required")
    return io.divisor_from_json(G, _load(args.divisor, "divisor"))


# -- OFF export -------------------------------------------------------------------------

def _off(vertices, faces) -> str:
    lines = ["OFF", f"{len(vertices)} {len(faces)} 0"]
    for v in vertices:
        v = list(v)[:3] + [0] * (3 - min(3, len(v)))
        lines.append(" ".join(repr(float(x)) for x in v))
    for f in faces:
        lines.append(" ".join(str(x) for x in [len(f)] + list(f)))
    return "\n".join(lines) + "\n"


def _cycle(edges):
    """Order the vertices of a polygon given by its edge list."""
    adj: dict = {}
    for a, b in edges:
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)
    start = min(adj)
    out, prev, cur = [start], None, start
    while True:
        nxt = next((w for w in adj[cur] if w != prev), None)
        if nxt is None or nxt == start:
            return out
        out.append(nxt)
        prev, cur = cur, nxt


def _linsys_off(eng, cx) -> str:
    """2-skeleton of |D| projected by values at a few sample points."""
    G = eng.G
    probe = [G.vertex_point(v) for v in sorted(G.vertices)]
    probe += [G.point(e, a + (b - a) * t / 4) for e, a, b in eng.pieces for t in (1, 2, 3)]
    probe = probe[:4]
    zero = cx.of_dimension(0)
    pos = {c.index: i for i, c in enumerate(zero)}
    coords = []
    for c in zero:
        f = eng.state_function(c)
        coords.append([f(p) - f(probe[0]) for p in probe[1:]])
    edges = {c.index: tuple(pos[v] for v in c.vertices) for c in cx.of_dimension(1)}
    faces = [list(e) for e in edges.values()]
    for c in cx.of_dimension(2):
        bd = [edges[i] for i in c.faces if i in edges]
        faces.append(_cycle(bd))
    return _off(coords, faces)


def _curve_off(C) -> str:
    pts = sorted({p for s in C.segments for p in (s.start, s.end)} | {r.base for r in C.rays})
    idx = {p: i for i, p in enumerate(pts)}
    coords = [p.chart()[1:] for p in pts]
    faces = [[idx[s.start], idx[s.end]] for s in C.segments]
    for r in C.rays:
        tip = [x + y for x, y in zip(r.base.chart(), [d - r.direction[0] for d in r.direction])]
        coords.append(tip[1:])
        faces.append([idx[r.base], len(coords) - 1])
    return _off(coords, faces)


# -- commands ---------------------------------------------------------------------------

def cmd_linsys(args):
    from .linear_system import LinearSystem, _generator_set, link_fine_subdivision

    G = _graph(args)
    D = _divisor(args, G)
    eng = LinearSystem(G, D, args.slope_bound, args.cap)
    if eng.is_empty:
        return {"empty": True, "message": "empty linear system", "degree": D.degree}, None
    cx = eng.cells()
    gens = _generator_set(eng)
    link = link_fine_subdivision(G, D, args.slope_bound)
    out = {
        "empty": False,
        "graph": io.graph_to_json(G),
        "divisor": io.divisor_to_json(D),
        "generators": [{"function": io.function_to_json(f), "divisor": io.divisor_to_json(E),
                        "extremal": x}
                       for f, E, x in zip(gens.functions, gens.divisors, gens.extremal)],
        "num_generators": len(gens),
        "num_extremals": sum(gens.extremal),
        "f_vector": cx.f_vector,
        "maximal_cells": sorted(len(c.vertices) for c in cx.maximal_cells()),
        "cells": io.cell_complex_to_json(cx),
        "link": io.complex_to_json(link, io.poset_element_to_json),
    }
    return out, (lambda: _linsys_off(eng, cx))


def cmd_embed(args):
    from .embedding import balance, curve_degree, is_base_point_free, is_hyperelliptic, is_very_ample
    from .errors import NotBasePointFree
    from .linear_system import generating_set

    G = _graph(args)
    D = _divisor(args, G)
    source = "generating_set"
    if args.functions:
        F = [io.function_from_json(G, f) for f in _load(args.functions, "functions")]
        source = "explicit"
        if not is_base_point_free(F, D):
            F = generating_set(G, D, args.slope_bound, args.cap).functions
            source = "generating_set (explicit set has base points)"
    else:
        F = generating_set(G, D, args.slope_bound, args.cap).functions
    if not F:
        raise NotBasePointFree("the linear system is empty")
    C = balance(G, F, D)
    deg = curve_degree(C)
    amp = is_very_ample(G, D, args.slope_bound, args.cap)
    hyp = is_hyperelliptic(G)
    out = {
        "functions_source": source,
        "num_functions": len(F),
        "curve": io.curve_to_json(C, deg),
        "degree": deg,
        "very_ample": amp.very_ample,
        "collision": [io.point_to_json(p) for p in amp.collision] if amp.collision else None,
        "hyperelliptic": hyp.witness is not None,
        "hyperelliptic_witness": io.divisor_to_json(hyp.witness) if hyp.witness else None,
        "hyperelliptic_verified_level": hyp.verified_level,
    }
    return out, (lambda: _curve_off(C))


def cmd_picard(args):
    from .picard import critical_group, picard_class

    G = io.graph_from_json(_load(args.graph, "graph"))
    k = args.model_level or 1
    grp = critical_group(subdivide(G, k), level=k, cap=args.cap)
    out = dict(io.group_to_json(grp), num_superstables=len(grp.representatives))
    if args.divisor:
        D = io.divisor_from_json(G, _load(args.divisor, "divisor"))
        c = picard_class(G, D)
        out["class"] = dict(io.class_to_json(c), order=c.order())
    return out, None


COMMANDS = {"linsys": cmd_linsys, "embed": cmd_embed, "picard": cmd_picard}


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="tropsys", description=__doc__.split("\n")[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in COMMANDS:
        s = sub.add_parser(name)
        s.add_argument("--graph", required=True, help="graph JSON file")
        s.add_argument("--divisor", help="divisor JSON file")
        s.add_argument("--model-level", type=int, default=None,
                       help="subdivision level of the model (default 1)")
        s.add_argument("--slope-bound", type=int, default=None,
                       help="bound on the slope of a single move (default: none)")
        s.add_argument("--cap", type=int, default=DEFAULT_CAP,
                       help=f"enumeration cap (default {DEFAULT_CAP})")
        s.add_argument("--out", help="output file (default stdout)")
        s.add_argument("--format", choices=("json", "off"), default="json")
        if name == "embed":
            s.add_argument("--functions", help="JSON list of functions to embed with")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.model_level is not None and args.model_level < 1:
            raise InvalidInput("--model-level must be positive")
        if args.cap < 1:
            raise InvalidInput("--cap must be positive")
        out, off = COMMANDS[args.command](args)
        if args.format == "off":
            if off is None:
                raise InvalidInput(f"OFF export is not available for {args.command}")
            text = off()
        else:
            text = io.dumps(out)
    except TooLarge as exc:
        print(f"tropsys: cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    except InvalidInput as exc:
        print(f"tropsys: invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except TropsysError as exc:
        print(f"tropsys: precondition failed: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

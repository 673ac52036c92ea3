"""Time the chip-firing kernels with numba and with plain numpy.

Run as ``python3 benchmarks/bench_kernels.py [--repeat N]``.  Both paths
must agree on every input; the script exits nonzero if they do not.
"""

import argparse
import os
import sys
import time

import numpy as np

from tropsys import _kernels
from tropsys.finite import FiniteModel
from tropsys.graph import graph_from_edges, subdivide


def _models():
    k4 = graph_from_edges([("a", "b"), ("a", "c"), ("a", "d"), ("b", "c"), ("b", "d"), ("c", "d")])
    banana = graph_from_edges([("x", "y")] * 3)
    return {
        "K4 level 3": FiniteModel(subdivide(k4, 3)),
        "banana level 6": FiniteModel(subdivide(banana, 6)),
        "K4 level 1 (superstables)": FiniteModel(k4),
        "banana level 3 (superstables)": FiniteModel(subdivide(banana, 3)),
    }


def _run(M, name, rng_seed=0):
    rng = np.random.default_rng(rng_seed)
    if "superstables" in name:
        return _kernels.superstables(M.A, M.deg, 0, 10 ** 5)
    out = []
    for _ in range(200):
        x = rng.integers(0, 4, size=M.n).astype(np.int64)
        x[0] = 0
        out.append(_kernels.reduce_nonnegative(M.A, x, 0))
    return np.array(out)


def _timed(M, name, repeat):
    best = float("inf")
    res = None
    for _ in range(repeat):
        t = time.perf_counter()
        res = _run(M, name)
        best = min(best, time.perf_counter() - t)
    return best, res


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    models = _models()
    ok = True
    print(f"{'case':32s} {'numba [s]':>10s} {'numpy [s]':>10s} {'speedup':>8s}")
    for name, M in models.items():
        os.environ.pop("TROPSYS_DISABLE_NUMBA", None)
        _run(M, name)  # compile
        t_nb, r_nb = _timed(M, name, args.repeat)
        os.environ["TROPSYS_DISABLE_NUMBA"] = "1"
        t_np, r_np = _timed(M, name, args.repeat)
        os.environ.pop("TROPSYS_DISABLE_NUMBA", None)
        same = np.array_equal(r_nb, r_np)
        ok &= same
        flag = "" if same else "  MISMATCH"
        print(f"{name:32s} {t_nb:10.4f} {t_np:10.4f} {t_np / max(t_nb, 1e-9):8.1f}{flag}")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())

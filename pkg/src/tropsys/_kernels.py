"""Integer chip-firing kernels on finite multigraphs.

Graphs are passed as a dense symmetric ``int64`` adjacency matrix ``A``
(loops dropped; they never move chips) and configurations as ``int64``
vectors.  Every kernel has a numba version and a plain numpy version; set
``TROPSYS_DISABLE_NUMBA=1`` to force the numpy path.
"""

from __future__ import annotations

import os

import numpy as np

try:
    from numba import njit
    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    _HAVE_NUMBA = False


def numba_enabled() -> bool:
    return _HAVE_NUMBA and os.environ.get("TROPSYS_DISABLE_NUMBA", "") not in ("1", "true", "yes")


# -- numpy path ---------------------------------------------------------------

def _unburnt_np(A, D, q):
    n = A.shape[0]
    burnt = np.zeros(n, dtype=np.bool_)
    burnt[q] = True
    while True:
        cnt = A[:, burnt].sum(axis=1)
        new = ~burnt & (cnt > D)
        if not new.any():
            return ~burnt
        burnt |= new


def _reduce_np(A, D, q):
    D = D.copy()
    while True:
        U = _unburnt_np(A, D, q)
        if not U.any():
            return D
        out = A[:, ~U][U].sum(axis=1)
        mask = out > 0
        k = int((D[U][mask] // out[mask]).min())
        flow = A[U].sum(axis=0) * k
        flow[U] = 0
        D[U] -= k * out
        D += flow


def _superstables_np(A, deg, q, cap):
    n = A.shape[0]
    free = [v for v in range(n) if v != q]
    bounds = np.array([deg[v] for v in free], dtype=np.int64)
    out = []
    c = np.zeros(len(free), dtype=np.int64)
    D = np.zeros(n, dtype=np.int64)
    while True:
        D[free] = c
        if not _unburnt_np(A, D, q).any():
            out.append(D.copy())
            if len(out) > cap:
                break
        i = 0
        while i < len(free):
            c[i] += 1
            if c[i] < bounds[i]:
                break
            c[i] = 0
            i += 1
        if i == len(free):
            break
    if not out:
        return np.zeros((0, n), dtype=np.int64)
    return np.array(out, dtype=np.int64)


# -- numba path ---------------------------------------------------------------

if _HAVE_NUMBA:
    @njit(cache=True)
    def _unburnt_nb(A, D, q):
        n = A.shape[0]
        burnt = np.zeros(n, dtype=np.bool_)
        burnt[q] = True
        cnt = np.zeros(n, dtype=np.int64)
        for w in range(n):
            cnt[w] = A[w, q]
        stack = np.empty(n, dtype=np.int64)
        top = 0
        for w in range(n):
            if not burnt[w] and cnt[w] > D[w]:
                burnt[w] = True
                stack[top] = w
                top += 1
        while top > 0:
            top -= 1
            v = stack[top]
            for w in range(n):
                if A[w, v] and not burnt[w]:
                    cnt[w] += A[w, v]
                    if cnt[w] > D[w]:
                        burnt[w] = True
                        stack[top] = w
                        top += 1
        return ~burnt

    @njit(cache=True)
    def _reduce_nb(A, D, q):
        D = D.copy()
        n = A.shape[0]
        while True:
            U = _unburnt_nb(A, D, q)
            if not U.any():
                return D
            out = np.zeros(n, dtype=np.int64)
            k = -1
            for v in range(n):
                if U[v]:
                    s = 0
                    for w in range(n):
                        if not U[w]:
                            s += A[v, w]
                    out[v] = s
                    if s > 0:
                        r = D[v] // s
                        if k < 0 or r < k:
                            k = r
            for v in range(n):
                if U[v]:
                    D[v] -= k * out[v]
                else:
                    s = 0
                    for w in range(n):
                        if U[w]:
                            s += A[v, w]
                    D[v] += k * s

    @njit(cache=True)
    def _superstables_nb(A, deg, q, cap):
        n = A.shape[0]
        m = n - 1
        free = np.empty(m, dtype=np.int64)
        j = 0
        for v in range(n):
            if v != q:
                free[j] = v
                j += 1
        c = np.zeros(m, dtype=np.int64)
        D = np.zeros(n, dtype=np.int64)
        out = np.zeros((cap + 1, n), dtype=np.int64)
        count = 0
        while True:
            for i in range(m):
                D[free[i]] = c[i]
            if not _unburnt_nb(A, D, q).any():
                out[count] = D
                count += 1
                if count > cap:
                    break
            i = 0
            while i < m:
                c[i] += 1
                if c[i] < deg[free[i]]:
                    break
                c[i] = 0
                i += 1
            if i == m:
                break
        return out[:count]


# -- dispatch -------------------------------------------------------------------

def unburnt(A: np.ndarray, D: np.ndarray, q: int) -> np.ndarray:
    """Vertices left unburnt by Dhar's algorithm from ``q``."""
    if numba_enabled():
        return _unburnt_nb(A, D, q)
    return _unburnt_np(A, D, q)


def is_superstable(A: np.ndarray, D: np.ndarray, q: int) -> bool:
    return not unburnt(A, D, q).any()


def reduce_nonnegative(A: np.ndarray, D: np.ndarray, q: int) -> np.ndarray:
    """q-reduce ``D``, which must already be nonnegative away from ``q``."""
    if numba_enabled():
        return _reduce_nb(A, D, q)
    return _reduce_np(A, D, q)


def superstables(A: np.ndarray, deg: np.ndarray, q: int, cap: int) -> np.ndarray:
    """All superstable configurations (rows), at most ``cap + 1`` of them."""
    if numba_enabled():
        return _superstables_nb(A, deg, q, cap)
    return _superstables_np(A, deg, q, cap)

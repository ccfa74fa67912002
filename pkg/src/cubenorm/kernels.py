"""Inner loops, each in a numba and a pure-numpy flavour.

The numba path is used by default.  Set ``CUBENORM_DISABLE_NUMBA=1`` before
import to route the public entry points to the numpy implementations (useful
where numba is unavailable or for cross-checking).  Both flavours are always
importable under explicit names so tests can compare them.
"""
from __future__ import annotations

import os

import numpy as np

__all__ = [
    "USE_NUMBA",
    "pair_benefits",
    "pair_benefits_numba",
    "pair_benefits_numpy",
    "matching_dp",
    "matching_dp_numba",
    "matching_dp_numpy",
]

_DISABLED = os.environ.get("CUBENORM_DISABLE_NUMBA", "").strip().lower() in {"1", "true", "yes", "on"}

try:
    from numba import njit
except ImportError:  # pragma: no cover - numba is a declared dependency
    njit = None

USE_NUMBA = njit is not None and not _DISABLED


def _jit(fn):
    if njit is None:  # pragma: no cover
        return fn
    return njit(cache=True, nogil=True)(fn)


# --------------------------------------------------------------------------
# benefit counting
#
# Input: ``pos`` and ``lab`` of equal length, sorted by (pos, lab).  ``pos``
# identifies a cell's position within its slice, ``lab`` the slice.  Output
# ``B[v, w]`` = number of positions allocated in both slice v and slice w.


def _pair_benefits_loop(pos, lab, n):
    out = np.zeros((n, n), dtype=np.int64)
    k = len(pos)
    start = 0
    while start < k:
        stop = start + 1
        while stop < k and pos[stop] == pos[start]:
            stop += 1
        for a in range(start, stop):
            la = lab[a]
            for b in range(a + 1, stop):
                lb = lab[b]
                out[la, lb] += 1
                out[lb, la] += 1
        start = stop
    return out


pair_benefits_numba = _jit(_pair_benefits_loop)


def pair_benefits_numpy(pos, lab, n):
    pos = np.asarray(pos, dtype=np.int64)
    lab = np.asarray(lab, dtype=np.int64)
    out = np.zeros((n, n), dtype=np.int64)
    k = len(pos)
    # element a pairs with a+t whenever both share a position; groups are
    # contiguous, so t never needs to exceed the largest group size
    t = 1
    while t < k:
        same = pos[t:] == pos[:-t]
        if not same.any():
            break
        la, lb = lab[:-t][same], lab[t:][same]
        np.add.at(out, (la, lb), 1)
        np.add.at(out, (lb, la), 1)
        t += 1
    return out


def pair_benefits(pos, lab, n):
    if USE_NUMBA:
        return pair_benefits_numba(np.ascontiguousarray(pos, dtype=np.int64),
                                   np.ascontiguousarray(lab, dtype=np.int64), int(n))
    return pair_benefits_numpy(pos, lab, n)


# --------------------------------------------------------------------------
# minimum-weight perfect matching by dynamic programming over vertex subsets
#
# best[T] is the cheapest perfect matching of vertex set T (even |T|).  The
# lowest vertex i of T is always paired with some j in T; candidates are
# scanned in ascending j and only a strictly smaller total replaces the
# incumbent, so both flavours break ties identically.


def _matching_dp_loop(w):
    n = w.shape[0]
    full = (1 << n) - 1
    best = np.zeros(1 << n, dtype=w.dtype)
    choice = np.full(1 << n, -1, dtype=np.int8)
    for T in range(1, full + 1):
        # popcount parity
        x = T
        bits = 0
        while x:
            x &= x - 1
            bits += 1
        if bits & 1:
            continue
        i = 0
        while not (T >> i) & 1:
            i += 1
        found = False
        cur = best[0]
        pick = -1
        for j in range(i + 1, n):
            if (T >> j) & 1:
                c = w[i, j] + best[T ^ (1 << i) ^ (1 << j)]
                if not found or c < cur:
                    cur = c
                    pick = j
                    found = True
        best[T] = cur
        choice[T] = pick
    mate = np.full(n, -1, dtype=np.int64)
    T = full
    while T:
        i = 0
        while not (T >> i) & 1:
            i += 1
        j = choice[T]
        mate[i] = j
        mate[j] = i
        T ^= (1 << i) | (1 << j)
    return best[full], mate


matching_dp_numba = _jit(_matching_dp_loop)


def matching_dp_numpy(w):
    w = np.asarray(w)
    n = w.shape[0]
    size = 1 << n
    masks = np.arange(size, dtype=np.int64)
    pop = np.zeros(size, dtype=np.int64)
    for j in range(n):
        pop += (masks >> j) & 1
    low = masks & -masks
    low_idx = np.zeros(size, dtype=np.int64)
    nz = low > 0
    low_idx[nz] = np.round(np.log2(low[nz].astype(np.float64))).astype(np.int64)

    best = np.zeros(size, dtype=w.dtype)
    choice = np.full(size, -1, dtype=np.int64)
    for layer in range(2, n + 1, 2):
        T = masks[pop == layer]
        i = low_idx[T]
        cur = np.zeros(len(T), dtype=w.dtype)
        found = np.zeros(len(T), dtype=bool)
        pick = np.full(len(T), -1, dtype=np.int64)
        for j in range(1, n):
            ok = (((T >> j) & 1) == 1) & (i < j)
            if not ok.any():
                continue
            rest = T[ok] ^ (np.int64(1) << i[ok]) ^ (np.int64(1) << j)
            c = w[i[ok], j] + best[rest]
            better = ~found[ok] | (c < cur[ok])
            idx = np.flatnonzero(ok)[better]
            cur[idx] = c[better]
            pick[idx] = j
            found[idx] = True
        best[T] = cur
        choice[T] = pick
    mate = np.full(n, -1, dtype=np.int64)
    T = size - 1
    while T:
        i = int(low_idx[T])
        j = int(choice[T])
        mate[i], mate[j] = j, i
        T ^= (1 << i) | (1 << j)
    return best[size - 1], mate


def matching_dp(w):
    if USE_NUMBA:
        return matching_dp_numba(np.ascontiguousarray(w))
    return matching_dp_numpy(w)

"""Integer kernels for the brute-force dominator search.

Lotteries are scaled to integer numerators over a common denominator so
the scan is exact in int64.  Each kernel has a numba version and a
vectorised numpy version.  Set ``RSDKIT_DISABLE_NUMBA=1`` to force numpy.
"""

from __future__ import annotations

import os

import numpy as np

DISABLE_NUMBA = os.environ.get("RSDKIT_DISABLE_NUMBA", "").strip().lower() in ("1", "true", "yes")

try:
    from numba import njit
except ImportError:  # pragma: no cover - numba is a declared dependency
    njit = None

HAVE_NUMBA = njit is not None and not DISABLE_NUMBA


def cumulative_thresholds(rank: np.ndarray, nclasses: np.ndarray) -> np.ndarray:
    """0/1 tensor ``C[i, x, k] = rank[i, x] <= k`` for ``k < nclasses[i]``.

    ``cand @ C[i]`` gives the upper contour masses of agent ``i`` per class.
    """
    ks = np.arange(int(nclasses.max()))
    C = (rank[:, :, None] <= ks[None, None, :]) & (ks[None, None, :] < nclasses[:, None, None])
    return C.astype(np.int64)


def dominator_scan_numpy(cands, rank, nclasses, target):
    """Index of the first row of ``cands`` that SD-dominates ``target``.

    ``target[i, k]`` holds the upper contour masses of the lottery under
    test for agent ``i``.  Dominating means weakly better for every agent at
    every class boundary and strictly better somewhere.  Returns -1 if none.
    """
    C = cumulative_thresholds(rank, nclasses)
    upper = np.einsum("km,imc->kic", cands, C)
    kmax = C.shape[2]
    valid = np.arange(kmax)[None, :] < nclasses[:, None]
    diff = upper - target[None, :, :]
    weak = np.all((diff >= 0) | ~valid[None], axis=(1, 2))
    strict = np.any((diff > 0) & valid[None], axis=(1, 2))
    hits = np.flatnonzero(weak & strict)
    return int(hits[0]) if hits.size else -1


def _dominator_scan_loop(cands, rank, nclasses, target):
    K, m = cands.shape
    n = rank.shape[0]
    kmax = target.shape[1]
    buf = np.zeros(kmax, dtype=np.int64)
    for k in range(K):
        ok = True
        strict = False
        for i in range(n):
            for c in range(kmax):
                buf[c] = 0
            for x in range(m):
                buf[rank[i, x]] += cands[k, x]
            acc = 0
            for c in range(nclasses[i]):
                acc += buf[c]
                if acc < target[i, c]:
                    ok = False
                    break
                if acc > target[i, c]:
                    strict = True
            if not ok:
                break
        if ok and strict:
            return k
    return -1


if HAVE_NUMBA:
    dominator_scan_numba = njit(cache=True, nogil=True)(_dominator_scan_loop)
else:
    dominator_scan_numba = None


def dominator_scan(cands, rank, nclasses, target):
    cands = np.ascontiguousarray(cands, dtype=np.int64)
    rank = np.ascontiguousarray(rank, dtype=np.int64)
    nclasses = np.ascontiguousarray(nclasses, dtype=np.int64)
    target = np.ascontiguousarray(target, dtype=np.int64)
    if HAVE_NUMBA:
        return int(dominator_scan_numba(cands, rank, nclasses, target))
    return dominator_scan_numpy(cands, rank, nclasses, target)


def compositions(total: int, parts: int) -> np.ndarray:
    """All nonnegative integer vectors of length ``parts`` summing to ``total``.

    Rows come out in lexicographic order.
    """
    if parts == 1:
        return np.array([[total]], dtype=np.int64)
    blocks = []
    for first in range(total + 1):
        tail = compositions(total - first, parts - 1)
        blocks.append(np.hstack([np.full((tail.shape[0], 1), first, dtype=np.int64), tail]))
    return np.vstack(blocks)


def lottery_grid(m: int, max_denominator: int) -> tuple:
    """Every lottery on ``m`` alternatives whose masses are ``k/d``, ``d <= max_denominator``.

    Returns ``(numerators, scale)`` with one distinct row per lottery and
    all rows sharing the denominator ``scale = lcm(1..max_denominator)``.
    """
    if m < 1 or max_denominator < 1:
        raise ValueError("need m >= 1 and max_denominator >= 1")
    scale = int(np.lcm.reduce(np.arange(1, max_denominator + 1, dtype=np.int64)))
    rows = [compositions(d, m) * (scale // d) for d in range(1, max_denominator + 1)]
    return np.unique(np.vstack(rows), axis=0), scale

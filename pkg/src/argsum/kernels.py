"""Numeric hot loops: weighted PageRank and average-linkage agglomeration.

Each kernel exists twice: a loop-oriented version compiled with numba's
@njit, and a vectorized pure-numpy fallback. The fallback is selected when
numba is unavailable or when ARGSUM_NO_NUMBA is set to 1/true/yes. Both
paths implement identical merge/tie rules; `benchmarks/bench_kernels.py`
compares their throughput.
"""

from __future__ import annotations

import os

import numpy as np


def numba_disabled_by_env() -> bool:
    return os.environ.get("ARGSUM_NO_NUMBA", "").strip().lower() in ("1", "true", "yes")


def _detect_numba() -> bool:
    if numba_disabled_by_env():
        return False
    try:
        import numba  # noqa: F401
    except ImportError:  # pragma: no cover - numba is a declared dependency
        return False
    return True


NUMBA_ENABLED = _detect_numba()


# --- pagerank ----------------------------------------------------------------

def _pagerank_numpy(weights, damping, tol, max_iter):
    n = weights.shape[0]
    strength = weights.sum(axis=1)
    safe = np.where(strength > 0.0, strength, 1.0)
    wt = np.ascontiguousarray(weights.T)
    x = np.full(n, 1.0 / n)
    teleport = (1.0 - damping) / n
    for _ in range(max_iter):
        contrib = np.where(strength > 0.0, x / safe, 0.0)
        x_new = teleport + damping * (wt @ contrib)
        delta = np.abs(x_new - x).sum()
        x = x_new
        if delta < tol:
            break
    return x / x.sum()


def _pagerank_loops(weights, damping, tol, max_iter):
    n = weights.shape[0]
    strength = np.zeros(n)
    for i in range(n):
        for j in range(n):
            strength[i] += weights[i, j]
    x = np.full(n, 1.0 / n)
    teleport = (1.0 - damping) / n
    for _ in range(max_iter):
        x_new = np.full(n, teleport)
        for i in range(n):
            if strength[i] > 0.0:
                share = damping * x[i] / strength[i]
                for j in range(n):
                    if weights[i, j] > 0.0:
                        x_new[j] += share * weights[i, j]
        delta = 0.0
        for i in range(n):
            delta += abs(x_new[i] - x[i])
        x = x_new
        if delta < tol:
            break
    total = 0.0
    for i in range(n):
        total += x[i]
    return x / total


# --- average-linkage agglomeration -------------------------------------------

def _linkage_numpy(sim, threshold):
    n = sim.shape[0]
    link = sim.copy()
    # Only the strict upper triangle is scanned; mask the rest out.
    link[np.tril_indices(n)] = -1.0
    size = np.ones(n)
    labels = np.arange(n, dtype=np.int64)
    active = np.ones(n, dtype=bool)
    for _ in range(n - 1):
        flat = int(np.argmax(link))
        i, j = divmod(flat, n)
        if link[i, j] <= threshold:
            break
        # Lance-Williams average-linkage update of the kept slot i.
        ks = np.nonzero(active)[0]
        ks = ks[(ks != i) & (ks != j)]
        a = np.where(ks > i, link[i, ks], link[ks, i])
        b = np.where(ks > j, link[j, ks], link[ks, j])
        v = (size[i] * a + size[j] * b) / (size[i] + size[j])
        hi = ks > i
        link[i, ks[hi]] = v[hi]
        link[ks[~hi], i] = v[~hi]
        size[i] += size[j]
        active[j] = False
        link[j, :] = -1.0
        link[:, j] = -1.0
        labels[labels == j] = i
    return labels


def _linkage_loops(sim, threshold):
    n = sim.shape[0]
    link = sim.copy()
    size = np.ones(n)
    labels = np.arange(n, dtype=np.int64)
    active = np.ones(n, dtype=np.bool_)
    for _ in range(n - 1):
        best = -1.0
        bi = -1
        bj = -1
        for i in range(n):
            if active[i]:
                for j in range(i + 1, n):
                    if active[j] and link[i, j] > best:
                        best = link[i, j]
                        bi = i
                        bj = j
        if bi < 0 or best <= threshold:
            break
        for k in range(n):
            if active[k] and k != bi and k != bj:
                a = link[min(bi, k), max(bi, k)]
                b = link[min(bj, k), max(bj, k)]
                v = (size[bi] * a + size[bj] * b) / (size[bi] + size[bj])
                link[min(bi, k), max(bi, k)] = v
        size[bi] += size[bj]
        active[bj] = False
        for p in range(n):
            if labels[p] == bj:
                labels[p] = bi
    return labels


if NUMBA_ENABLED:
    from numba import njit

    _pagerank_numba = njit(cache=True)(_pagerank_loops)
    _linkage_numba = njit(cache=True)(_linkage_loops)
else:  # pragma: no cover - exercised via subprocess in tests
    _pagerank_numba = None
    _linkage_numba = None


def pagerank_scores(
    weights: np.ndarray,
    damping: float = 0.85,
    tol: float = 1e-8,
    max_iter: int = 10_000,
) -> np.ndarray:
    """Stationary importance scores on an undirected weighted graph.

    Power iteration of x <- (1-d)/n + d * P'x where P row-normalizes the
    weight matrix; rows of isolated nodes stay zero, leaving them at the
    teleport-only level. The result is normalized to sum to one.
    """
    w = np.ascontiguousarray(np.asarray(weights, dtype=np.float64))
    if w.ndim != 2 or w.shape[0] != w.shape[1]:
        raise ValueError("weights must be a square matrix")
    if w.shape[0] == 0:
        return np.zeros(0)
    if NUMBA_ENABLED:
        return _pagerank_numba(w, float(damping), float(tol), int(max_iter))
    return _pagerank_numpy(w, float(damping), float(tol), int(max_iter))


def linkage_merge_labels(sim: np.ndarray, threshold: float) -> np.ndarray:
    """Agglomerate singletons by average linkage until best linkage <= threshold.

    Returns one slot label per input index; merged items share the slot of
    the lowest-index member. Ties pick the lexicographically smallest (i, j).
    Similarities must lie in [0, 1].
    """
    s = np.ascontiguousarray(np.asarray(sim, dtype=np.float64))
    if s.ndim != 2 or s.shape[0] != s.shape[1]:
        raise ValueError("similarity matrix must be square")
    if s.size and (s.min() < 0.0 or s.max() > 1.0):
        raise ValueError("similarities must lie in [0, 1]")
    if NUMBA_ENABLED:
        return _linkage_numba(s, float(threshold))
    return _linkage_numpy(s, float(threshold))


def implementations() -> dict[str, dict[str, object]]:
    """Both paths of each kernel, for equivalence tests and the benchmark."""
    out: dict[str, dict[str, object]] = {
        "pagerank": {"numpy": _pagerank_numpy},
        "linkage": {"numpy": _linkage_numpy},
    }
    if NUMBA_ENABLED:
        out["pagerank"]["numba"] = _pagerank_numba
        out["linkage"]["numba"] = _linkage_numba
    return out

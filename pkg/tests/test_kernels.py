"""Kernel equivalence against independently written oracles.

The oracles here are deliberately naive: the clustering oracle recomputes
every cluster-pair average from the original matrix at every step, and the
ranking oracle is a direct dense power iteration. Both were written before
the kernels and share only the documented tie rules.
"""

import subprocess
import sys

import numpy as np
import pytest

from argsum import kernels


# --- oracles -------------------------------------------------------------------

def naive_average_linkage(sim: np.ndarray, threshold: float) -> list[list[int]]:
    """Full-recomputation agglomeration; clusters kept sorted by min member."""
    n = sim.shape[0]
    clusters: list[list[int]] = [[i] for i in range(n)]
    while len(clusters) > 1:
        best, bx, by = -1.0, -1, -1
        for x in range(len(clusters)):
            for y in range(x + 1, len(clusters)):
                total = 0.0
                for p in clusters[x]:
                    for q in clusters[y]:
                        total += sim[p, q]
                avg = total / (len(clusters[x]) * len(clusters[y]))
                if avg > best:
                    best, bx, by = avg, x, y
        if bx < 0 or best <= threshold:
            break
        merged = sorted(clusters[bx] + clusters[by])
        clusters = [c for k, c in enumerate(clusters) if k not in (bx, by)]
        clusters.append(merged)
        clusters.sort(key=lambda c: c[0])
    return clusters


def naive_pagerank(
    weights: np.ndarray, damping: float = 0.85, tol: float = 1e-8, max_iter: int = 10_000
) -> np.ndarray:
    n = weights.shape[0]
    transition = np.zeros((n, n))
    for i in range(n):
        s = weights[i].sum()
        if s > 0:
            transition[i] = weights[i] / s
    x = np.ones(n) / n
    for _ in range(max_iter):
        x_new = (1.0 - damping) / n + damping * transition.T.dot(x)
        delta = np.abs(x_new - x).sum()
        x = x_new
        if delta < tol:
            break
    return x / x.sum()


def labels_to_partition(labels: np.ndarray) -> list[list[int]]:
    groups: dict[int, list[int]] = {}
    for idx, slot in enumerate(labels):
        groups.setdefault(int(slot), []).append(idx)
    return [groups[s] for s in sorted(groups)]


# --- linkage -------------------------------------------------------------------

def random_similarity(rng: np.random.Generator, n: int) -> np.ndarray:
    raw = rng.uniform(0.0, 1.0, size=(n, n))
    sym = (raw + raw.T) / 2.0
    np.fill_diagonal(sym, 0.0)
    return sym


class TestLinkage:
    def test_no_merges_at_threshold_one(self):
        rng = np.random.default_rng(0)
        sim = random_similarity(rng, 6)
        labels = kernels.linkage_merge_labels(sim, 1.0)
        assert sorted(labels) == list(range(6))

    def test_single_cluster_at_threshold_zero(self):
        rng = np.random.default_rng(1)
        sim = random_similarity(rng, 6)
        sim[sim == 0.0] = 0.01
        np.fill_diagonal(sim, 0.0)
        labels = kernels.linkage_merge_labels(sim, 0.0)
        assert len(set(labels.tolist())) == 1

    @pytest.mark.parametrize("seed", range(25))
    def test_matches_naive_oracle(self, seed):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(2, 13))
        sim = random_similarity(rng, n)
        threshold = float(rng.uniform(0.0, 1.0))
        ours = labels_to_partition(kernels.linkage_merge_labels(sim, threshold))
        oracle = naive_average_linkage(sim, threshold)
        assert ours == oracle

    def test_input_order_independence_via_permutation(self):
        rng = np.random.default_rng(42)
        n = 9
        sim = random_similarity(rng, n)
        base = labels_to_partition(kernels.linkage_merge_labels(sim, 0.45))
        perm = rng.permutation(n)
        permuted = sim[np.ix_(perm, perm)]
        out = labels_to_partition(kernels.linkage_merge_labels(permuted, 0.45))
        mapped = sorted(sorted(int(perm[i]) for i in cl) for cl in out)
        assert mapped == sorted(sorted(cl) for cl in base)

    def test_both_paths_agree(self):
        rng = np.random.default_rng(3)
        for _ in range(10):
            n = int(rng.integers(2, 15))
            sim = random_similarity(rng, n)
            threshold = float(rng.uniform(0.0, 1.0))
            a = kernels._linkage_loops(sim, threshold)
            b = kernels._linkage_numpy(sim, threshold)
            assert np.array_equal(a, b)


# --- pagerank ------------------------------------------------------------------

class TestPagerank:
    def test_single_node(self):
        scores = kernels.pagerank_scores(np.zeros((1, 1)))
        assert scores.shape == (1,)
        assert scores[0] == pytest.approx(1.0, abs=1e-12)

    def test_symmetric_triangle_exact_thirds(self):
        w = np.ones((3, 3)) - np.eye(3)
        scores = kernels.pagerank_scores(w)
        assert np.allclose(scores, 1.0 / 3.0, atol=1e-12)
        assert abs(scores.sum() - 1.0) < 1e-9

    def test_isolated_nodes_get_teleport_floor(self):
        w = np.zeros((4, 4))
        w[0, 1] = w[1, 0] = 0.9
        scores = kernels.pagerank_scores(w)
        # Nodes 2 and 3 have no edges: equal minimal scores.
        assert scores[2] == pytest.approx(scores[3], abs=1e-12)
        assert scores[2] < scores[0]
        assert abs(scores.sum() - 1.0) < 1e-9

    @pytest.mark.parametrize("seed", range(20))
    def test_matches_oracle(self, seed):
        rng = np.random.default_rng(100 + seed)
        n = int(rng.integers(2, 11))
        w = rng.uniform(0.0, 1.0, size=(n, n))
        w = (w + w.T) / 2.0
        w[w < 0.3] = 0.0  # sparsify; may isolate nodes
        np.fill_diagonal(w, 0.0)
        ours = kernels.pagerank_scores(w)
        oracle = naive_pagerank(w)
        assert abs(ours.sum() - 1.0) < 1e-9
        assert np.allclose(ours, oracle, atol=1e-6)

    def test_both_paths_agree(self):
        rng = np.random.default_rng(5)
        for _ in range(10):
            n = int(rng.integers(2, 12))
            w = rng.uniform(0.0, 1.0, size=(n, n))
            w = (w + w.T) / 2.0
            np.fill_diagonal(w, 0.0)
            a = kernels._pagerank_loops(w, 0.85, 1e-8, 10_000)
            b = kernels._pagerank_numpy(w, 0.85, 1e-8, 10_000)
            assert np.allclose(a, b, atol=1e-12)


# --- dispatch ------------------------------------------------------------------

def test_env_flag_selects_numpy_fallback():
    code = (
        "import os; os.environ['ARGSUM_NO_NUMBA'] = '1';"
        "from argsum import kernels; import numpy as np;"
        "assert not kernels.NUMBA_ENABLED;"
        "w = np.ones((3, 3)) - np.eye(3);"
        "s = kernels.pagerank_scores(w);"
        "assert abs(s.sum() - 1.0) < 1e-9;"
        "print('fallback-ok')"
    )
    out = subprocess.run(
        [sys.executable, "-c", code], capture_output=True, text=True, check=True
    )
    assert "fallback-ok" in out.stdout


def test_implementations_exposes_both_paths():
    impls = kernels.implementations()
    assert "numpy" in impls["pagerank"] and "numpy" in impls["linkage"]
    if kernels.NUMBA_ENABLED:
        assert "numba" in impls["pagerank"] and "numba" in impls["linkage"]


def test_validation():
    with pytest.raises(ValueError):
        kernels.linkage_merge_labels(np.array([[0.0, 1.5], [1.5, 0.0]]), 0.5)
    with pytest.raises(ValueError):
        kernels.pagerank_scores(np.zeros((2, 3)))

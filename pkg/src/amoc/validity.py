"""Cluster validity indices and the misclassification error rate.

Pair-counting indices (Rand, adjusted Rand) work off the contingency table.
Geometric indices (silhouette, Davies-Bouldin, CS) use plain Euclidean
distance unless asked otherwise.  Every function accepts either a :class:`~amoc.datasets.Dataset`
or a raw ``(m, n)`` array for the data argument.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

from .numerics import pairwise_distances, pairwise_sq_distances


def _points(data) -> np.ndarray:
    return np.asarray(getattr(data, "points", data), dtype=float)


def as_partition(labels) -> np.ndarray:
    """Compact cluster ids to 0..k-1, preserving their sorted order."""
    lab = np.asarray(getattr(labels, "assignments", labels))
    if lab.ndim != 1:
        raise ValueError("a partition is a one-dimensional sequence of ids")
    if lab.size and (not np.issubdtype(lab.dtype, np.integer) or lab.min() < 0):
        raise ValueError("partition ids must be nonnegative integers")
    _, inv = np.unique(lab, return_inverse=True)
    return inv.astype(np.int64)


@dataclass(frozen=True)
class ContingencyTable:
    counts: np.ndarray

    @property
    def row_sums(self) -> np.ndarray:
        return self.counts.sum(axis=1)

    @property
    def col_sums(self) -> np.ndarray:
        return self.counts.sum(axis=0)

    @property
    def total(self) -> int:
        return int(self.counts.sum())


def contingency(p, q) -> ContingencyTable:
    p, q = as_partition(p), as_partition(q)
    if p.shape != q.shape:
        raise ValueError(f"partitions differ in length: {p.size} vs {q.size}")
    counts = np.zeros((p.max() + 1, q.max() + 1), dtype=np.int64)
    np.add.at(counts, (p, q), 1)
    return ContingencyTable(counts)


def _comb2(x):
    x = np.asarray(x, dtype=np.int64)
    return x * (x - 1) // 2


def _pair_sums(p, q):
    table = contingency(p, q)
    m = table.total
    if m < 2:
        raise ValueError("pair-counting indices need at least two points")
    together_both = int(_comb2(table.counts).sum())
    together_p = int(_comb2(table.row_sums).sum())
    together_q = int(_comb2(table.col_sums).sum())
    return together_both, together_p, together_q, m * (m - 1) // 2


def rand_index(p, q) -> float:
    both, tp, tq, total = _pair_sums(p, q)
    # agreements = together in both + apart in both
    agreements = total + 2 * both - tp - tq
    return agreements / total


def adjusted_rand(p, q) -> float:
    both, tp, tq, total = _pair_sums(p, q)
    expected = tp * tq / total
    max_index = 0.5 * (tp + tq)
    denom = max_index - expected
    if denom == 0:
        # same partition up to relabeling iff every co-clustered pair agrees
        return 1.0 if both == tp == tq else 0.0
    return (both - expected) / denom


def silhouette(data, labels, distances=None, squared: bool = False) -> float:
    """Mean silhouette width; singleton clusters contribute 0.

    ``distances`` may carry a precomputed ``(m, m)`` dissimilarity matrix.
    ``squared=True`` uses squared Euclidean dissimilarities instead, the
    variant MATLAB's ``silhouette`` computes by default.
    """
    lab = as_partition(labels)
    k = lab.max() + 1
    if k < 2:
        raise ValueError("silhouette needs at least two clusters")
    if distances is None:
        x = _points(data)
        D = pairwise_sq_distances(x) if squared else pairwise_distances(x)
    else:
        D = distances
    onehot = np.zeros((lab.size, k))
    onehot[np.arange(lab.size), lab] = 1.0
    sizes = onehot.sum(axis=0)
    sums = D @ onehot  # (m, k): total distance from each point to each cluster
    own = sizes[lab]
    with np.errstate(divide="ignore", invalid="ignore"):
        a = sums[np.arange(lab.size), lab] / (own - 1)
        mean_to = sums / sizes
    mean_to[np.arange(lab.size), lab] = np.inf
    b = mean_to.min(axis=1)
    denom = np.maximum(a, b)
    with np.errstate(divide="ignore", invalid="ignore"):
        s = np.where(denom > 0, (b - a) / denom, 0.0)
    s[own == 1] = 0.0
    return float(s.mean())


def _centroid_setup(data, result):
    x = _points(data)
    lab = as_partition(result)
    k = lab.max() + 1
    if k < 2:
        raise ValueError("index needs at least two clusters")
    centroids = getattr(result, "centroids", None)
    if centroids is None:
        centroids = np.array([x[lab == c].mean(axis=0) for c in range(k)])
    centroids = np.asarray(centroids, dtype=float)
    if centroids.shape[0] != k:
        raise ValueError("result has empty clusters")
    return x, lab, k, centroids


def davies_bouldin(data, result) -> float:
    """Davies-Bouldin index; ``result`` is a ClusteringResult or a label array.

    For a bare label array the centroids are the cluster means.
    """
    x, lab, k, c = _centroid_setup(data, result)
    scatter = np.array(
        [np.linalg.norm(x[lab == i] - c[i], axis=1).mean() for i in range(k)]
    )
    sep = pairwise_distances(c)
    worst = np.zeros(k)
    for i in range(k):
        for j in range(k):
            if i == j:
                continue
            if sep[i, j] == 0:
                raise ValueError(f"clusters {i} and {j} have coincident centroids")
            worst[i] = max(worst[i], (scatter[i] + scatter[j]) / sep[i, j])
    return float(worst.mean())


def cs_measure(data, result, distances=None) -> float:
    """CS index: mean within-cluster maximum spread over nearest-centroid gaps."""
    x, lab, k, c = _centroid_setup(data, result)
    D = pairwise_distances(x) if distances is None else distances
    numerator = 0.0
    for i in range(k):
        idx = np.flatnonzero(lab == i)
        numerator += D[np.ix_(idx, idx)].max(axis=1).mean()
    sep = pairwise_distances(c)
    np.fill_diagonal(sep, np.inf)
    denominator = sep.min(axis=1).sum()
    if denominator == 0:
        raise ValueError("CS measure undefined: coincident centroids")
    return float(numerator / denominator)


def error_rate(predicted, truth) -> float:
    """Percentage of points misclassified under the best cluster-to-class map.

    The map is injective and chosen by optimal assignment on the contingency
    table; clusters left unmapped count entirely as errors.
    """
    table = contingency(predicted, truth)
    rows, cols = linear_sum_assignment(table.counts, maximize=True)
    matched = int(table.counts[rows, cols].sum())
    m = table.total
    return 100.0 * (m - matched) / m

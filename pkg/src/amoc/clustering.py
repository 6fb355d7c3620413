"""Centroid seeding, Lloyd's k-means, fuzzy c-means and merge primitives."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .numerics import RandomSource, pairwise_distances, pairwise_sq_distances

LLOYD_MAX_ITER = 300
FCM_FUZZIFIER = 2.0
FCM_TOL = 1e-5
FCM_MAX_ITER = 300


def _points(data) -> np.ndarray:
    return np.asarray(getattr(data, "points", data), dtype=float)


@dataclass
class ClusteringResult:
    assignments: np.ndarray
    centroids: np.ndarray
    sse: float
    iterations: int = 0
    sse_history: list[float] = field(default_factory=list, repr=False)

    @property
    def k(self) -> int:
        return self.centroids.shape[0]

    def sizes(self) -> np.ndarray:
        return np.bincount(self.assignments, minlength=self.k)


@dataclass
class FuzzyResult:
    membership: np.ndarray
    centroids: np.ndarray
    fuzzifier: float
    hardened: ClusteringResult
    iterations: int = 0


def compute_sse(x, assignments, centroids) -> float:
    d = x - centroids[assignments]
    return float(np.einsum("ij,ij->", d, d))


def _check_k(m: int, k: int) -> None:
    if not 2 <= k <= m:
        raise ValueError(f"k must lie in [2, {m}], got {k}")


def seed_random(data, k: int, rng: RandomSource) -> np.ndarray:
    """k distinct data points picked uniformly as initial centroids."""
    x = _points(data)
    _check_k(x.shape[0], k)
    return x[rng.sample_without_replacement(x.shape[0], k)].copy()


def kmeanspp_indices(x: np.ndarray, k: int, rng: RandomSource) -> list[int]:
    m = x.shape[0]
    chosen = [int(rng.sample_without_replacement(m, 1)[0])]
    closest = pairwise_sq_distances(x, x[chosen[0]][None, :])[:, 0]
    for _ in range(1, k):
        weights = closest.copy()
        weights[chosen] = 0.0
        if weights.sum() > 0:
            nxt = rng.weighted_index(weights)
        else:
            # every remaining point sits on a chosen centroid
            rest = np.setdiff1d(np.arange(m), chosen)
            nxt = int(rest[rng.sample_without_replacement(rest.size, 1)[0]])
        chosen.append(nxt)
        closest = np.minimum(closest, pairwise_sq_distances(x, x[nxt][None, :])[:, 0])
    return chosen


def seed_kmeanspp(data, k: int, rng: RandomSource) -> np.ndarray:
    """k-means++ seeding: D^2-weighted draws after a uniform first pick."""
    x = _points(data)
    _check_k(x.shape[0], k)
    return x[kmeanspp_indices(x, k, rng)].copy()


def _repair_empty(x, labels, centroids, d2_assigned):
    """Give each empty cluster the point farthest from its own centroid."""
    k = centroids.shape[0]
    sizes = np.bincount(labels, minlength=k)
    if sizes.min() > 0:
        return labels
    labels = labels.copy()
    dist = d2_assigned.copy()
    for j in np.flatnonzero(sizes == 0):
        order = np.argsort(-dist, kind="stable")
        for i in order:
            if sizes[labels[i]] > 1:
                break
        else:  # pragma: no cover - fewer points than clusters
            raise ValueError("cannot repair empty cluster: too few points")
        sizes[labels[i]] -= 1
        labels[i] = j
        sizes[j] = 1
        dist[i] = -1.0  # pinned as the sole member of cluster j
    return labels


def _means(x, labels, k):
    sums = np.zeros((k, x.shape[1]))
    np.add.at(sums, labels, x)
    return sums / np.bincount(labels, minlength=k)[:, None]


def lloyd(data, initial_centroids, max_iter: int = LLOYD_MAX_ITER) -> ClusteringResult:
    """Alternate nearest-centroid assignment and mean updates until stable.

    Ties go to the lowest centroid index. ``sse_history`` records the
    objective after every update step and is non-increasing.
    """
    x = _points(data)
    centroids = np.array(initial_centroids, dtype=float, ndmin=2)
    if centroids.shape[1] != x.shape[1]:
        raise ValueError(
            f"dimension mismatch: data has {x.shape[1]} features, centroids {centroids.shape[1]}"
        )
    k = centroids.shape[0]
    labels = None
    history: list[float] = []
    it = 0
    for it in range(1, max_iter + 1):
        d2 = pairwise_sq_distances(x, centroids)
        new = np.argmin(d2, axis=1)
        new = _repair_empty(x, new, centroids, d2[np.arange(x.shape[0]), new])
        if labels is not None and np.array_equal(new, labels):
            break
        labels = new
        centroids = _means(x, labels, k)
        history.append(compute_sse(x, labels, centroids))
    return ClusteringResult(
        assignments=labels,
        centroids=centroids,
        sse=history[-1],
        iterations=it,
        sse_history=history,
    )


def kmeans(data, k: int, rng: RandomSource, seeding: str = "random") -> ClusteringResult:
    seeds = seed_kmeanspp(data, k, rng) if seeding == "kmeanspp" else seed_random(data, k, rng)
    return lloyd(data, seeds)


def finalize(data, labels) -> ClusteringResult:
    """Hard result from labels: compact ids and use cluster means as centroids."""
    x = _points(data)
    _, lab = np.unique(labels, return_inverse=True)
    k = lab.max() + 1
    centroids = _means(x, lab, k)
    return ClusteringResult(lab, centroids, compute_sse(x, lab, centroids))


def fuzzy_cmeans(
    data,
    k: int,
    rng: RandomSource,
    fuzzifier: float = FCM_FUZZIFIER,
    tol: float = FCM_TOL,
    max_iter: int = FCM_MAX_ITER,
) -> FuzzyResult:
    """Standard fuzzy c-means started from randomly picked data points."""
    x = _points(data)
    _check_k(x.shape[0], k)
    if not fuzzifier > 1:
        raise ValueError("fuzzifier must exceed 1")
    centroids = seed_random(x, k, rng)
    u = _memberships(x, centroids, fuzzifier)
    it = 0
    for it in range(1, max_iter + 1):
        w = u ** fuzzifier
        centroids = (w.T @ x) / w.sum(axis=0)[:, None]
        new_u = _memberships(x, centroids, fuzzifier)
        delta = np.abs(new_u - u).max()
        u = new_u
        if delta < tol:
            break
    hard = finalize(x, np.argmax(u, axis=1))
    hard.iterations = it
    return FuzzyResult(u, centroids, fuzzifier, hard, it)


def _memberships(x, centroids, fuzzifier):
    d = pairwise_distances(x, centroids)
    u = np.zeros_like(d)
    zero = d == 0
    hit = zero.any(axis=1)
    # a point sitting on a centroid belongs to it alone
    first_zero = np.argmax(zero[hit], axis=1)
    u[np.flatnonzero(hit), first_zero] = 1.0
    rest = ~hit
    if rest.any():
        power = 2.0 / (fuzzifier - 1.0)
        inv = d[rest] ** (-power)
        u[rest] = inv / inv.sum(axis=1, keepdims=True)
    return u


def cluster_probabilities(result: ClusteringResult, m: int | None = None) -> np.ndarray:
    sizes = result.sizes()
    return sizes / (sizes.sum() if m is None else m)


def linkage_matrix(distances: np.ndarray, assignments, k: int) -> np.ndarray:
    """Average-linkage distance between every pair of clusters."""
    onehot = np.zeros((assignments.size, k))
    onehot[np.arange(assignments.size), assignments] = 1.0
    sizes = onehot.sum(axis=0)
    return (onehot.T @ distances @ onehot) / np.outer(sizes, sizes)


def average_linkage(data, result: ClusteringResult, i: int, j: int) -> float:
    """Mean Euclidean distance over all pairs drawn from clusters i and j."""
    if i == j:
        raise ValueError("average linkage needs two distinct clusters")
    x = _points(data)
    a = x[result.assignments == i]
    b = x[result.assignments == j]
    if not len(a) or not len(b):
        raise ValueError("average linkage of an empty cluster")
    return float(pairwise_distances(a, b).mean())


def merge_labels(assignments: np.ndarray, src: int, dst: int) -> np.ndarray:
    """Move src into dst and close the gap left by src."""
    lab = np.where(assignments == src, dst, assignments)
    return np.where(lab > src, lab - 1, lab)


def merge_clusters(data, result: ClusteringResult, src: int, dst: int) -> ClusteringResult:
    k = result.k
    if src == dst or not (0 <= src < k and 0 <= dst < k):
        raise ValueError(f"invalid merge {src} -> {dst} for k={k}")
    x = _points(data)
    lab = merge_labels(result.assignments, src, dst)
    centroids = _means(x, lab, k - 1)
    return ClusteringResult(lab, centroids, compute_sse(x, lab, centroids))

"""Automatic merging of over-segmented k-means clusters.

The data is first split into ``k_max`` clusters with k-means.  Clusters are
then visited from the least to the most populous; each is tentatively merged
into its nearest neighbour under average linkage, and the merge is kept only
when it strictly improves the partition score.  Whenever a round of merges
lowers k, k-means is rerun from the surviving centroids and merging resumes.
The loop ends when a merge round changes nothing.  The partition returned
is the best-scoring one seen, so a rerun that lowers the score never replaces
an earlier, better state.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .clustering import (
    ClusteringResult,
    lloyd,
    linkage_matrix,
    merge_clusters,
    seed_kmeanspp,
    seed_random,
)
from .datasets import default_kmax
from .numerics import RandomSource, pairwise_distances
from .validity import rand_index, silhouette


class Seeding(str, enum.Enum):
    RANDOM = "random"
    KMEANSPP = "kmeanspp"


class Criterion(str, enum.Enum):
    REFERENCE_RAND = "reference_rand"
    INTERNAL_SILHOUETTE = "internal_silhouette"


class RestartMode(str, enum.Enum):
    MERGED_CENTROIDS = "merged_centroids"
    RANDOM_RESTART = "random_restart"


@dataclass(frozen=True)
class TraceStep:
    round: int
    action: str  # init | accept | reject | recluster
    k: int
    score: float
    src: int = -1
    dst: int = -1


@dataclass
class AmocResult:
    result: ClusteringResult
    trace: list[TraceStep] = field(default_factory=list)
    k_max: int = 0
    rounds: int = 0

    @property
    def k(self) -> int:
        return self.result.k

    @property
    def accepted_scores(self) -> list[float]:
        return [s.score for s in self.trace if s.action in ("init", "recluster", "accept")]


def _make_scorer(criterion, reference, distances):
    if criterion is Criterion.REFERENCE_RAND:
        ref = np.asarray(reference)
        return lambda labels: rand_index(labels, ref)
    return lambda labels: silhouette(None, labels, distances=distances)


def amoc(
    data,
    rng: RandomSource,
    k_max: int | None = None,
    seeding: Seeding | str = Seeding.KMEANSPP,
    criterion: Criterion | str = Criterion.REFERENCE_RAND,
    reference=None,
    restart: RestartMode | str = RestartMode.MERGED_CENTROIDS,
) -> AmocResult:
    seeding = Seeding(seeding)
    criterion = Criterion(criterion)
    restart = RestartMode(restart)
    x = np.asarray(getattr(data, "points", data), dtype=float)
    m = x.shape[0]
    if reference is None and criterion is Criterion.REFERENCE_RAND:
        reference = getattr(data, "labels", None)
        if reference is None:
            raise ValueError("the reference Rand criterion needs a reference partition")
    if reference is not None and len(reference) != m:
        raise ValueError("reference partition length differs from the data")
    if k_max is None:
        k_max = default_kmax(m)
    if not 2 <= k_max <= m:
        raise ValueError(f"k_max must lie in [2, {m}], got {k_max}")

    distances = pairwise_distances(x)
    score_of = _make_scorer(criterion, reference, distances)
    seed = seed_kmeanspp if seeding is Seeding.KMEANSPP else seed_random

    trace: list[TraceStep] = []
    current = lloyd(x, seed(x, k_max, rng))
    score = score_of(current.assignments)
    trace.append(TraceStep(0, "init", current.k, score))
    best, best_score = current, -np.inf

    rnd = 0
    while True:
        rnd += 1
        k_before = current.k
        current, score = _merge_round(x, current, score, score_of, distances, trace, rnd)
        if current.k == k_before:
            break
        if restart is RestartMode.MERGED_CENTROIDS:
            rerun = lloyd(x, current.centroids)
        else:
            rerun = lloyd(x, seed(x, current.k, rng))
        if score > best_score:
            best, best_score = current, score
        current, score = rerun, score_of(rerun.assignments)
        trace.append(TraceStep(rnd, "recluster", current.k, score))

    if score > best_score:
        best, best_score = current, score
    return AmocResult(best, trace, k_max, rnd)


def _merge_round(x, current, score, score_of, distances, trace, rnd):
    """Visit clusters by ascending size, restarting the visit after each accept."""
    while current.k > 2:
        sizes = current.sizes()
        link = linkage_matrix(distances, current.assignments, current.k)
        np.fill_diagonal(link, np.inf)
        accepted = False
        for src in np.argsort(sizes, kind="stable"):
            dst = int(np.argmin(link[src]))
            candidate = merge_clusters(x, current, int(src), dst)
            cand_score = score_of(candidate.assignments)
            if cand_score > score:
                current, score = candidate, cand_score
                trace.append(TraceStep(rnd, "accept", current.k, score, int(src), dst))
                accepted = True
                break
            trace.append(TraceStep(rnd, "reject", candidate.k, cand_score, int(src), dst))
        if not accepted:
            break
    return current, score

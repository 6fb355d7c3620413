"""Numerical primitives shared by the clustering code.

Distances, the Cholesky factorization used for Gaussian sampling, and
``RandomSource``, the seeded random stream every stochastic routine draws
from.  ``RandomSource`` wraps numpy's PCG64 bit generator; child streams
are derived through ``numpy.random.SeedSequence`` spawn keys so that the
stream for (master seed, algorithm, run) is reproducible and independent of
every other run.
"""
from __future__ import annotations

import zlib

import numpy as np

SYMMETRY_TOL = 1e-9


class NotPositiveDefiniteError(ValueError):
    """Raised when a covariance matrix fails Cholesky factorization."""

    def __init__(self, pivot: int, value: float):
        self.pivot = pivot
        self.value = value
        super().__init__(
            f"matrix is not positive definite: pivot {pivot} is {value:.6g}"
        )


class RandomSource:
    """Deterministic random stream seeded by a 64-bit integer.

    Not thread safe; give each task its own instance (see :meth:`child`).
    """

    def __init__(self, seed: int):
        self.seed = int(seed) & 0xFFFFFFFFFFFFFFFF
        self._gen = np.random.Generator(np.random.PCG64(self.seed))

    @staticmethod
    def derive_seed(master_seed: int, *keys: int | str) -> int:
        """64-bit seed for the child stream identified by ``keys``."""
        spawn_key = tuple(
            zlib.crc32(k.encode("utf-8")) if isinstance(k, str) else int(k)
            for k in keys
        )
        ss = np.random.SeedSequence(
            int(master_seed) & 0xFFFFFFFFFFFFFFFF, spawn_key=spawn_key
        )
        return int(ss.generate_state(1, dtype=np.uint64)[0])

    def child(self, *keys: int | str) -> "RandomSource":
        return RandomSource(self.derive_seed(self.seed, *keys))

    def uniform(self, size=None):
        """Uniform reals in [0, 1)."""
        return self._gen.random(size)

    def standard_normal(self, size=None):
        return self._gen.standard_normal(size)

    def sample_without_replacement(self, n: int, k: int) -> np.ndarray:
        """``k`` distinct indices drawn uniformly from ``range(n)``."""
        if not 0 <= k <= n:
            raise ValueError(f"cannot draw {k} distinct items from {n}")
        return self._gen.permutation(n)[:k]

    def weighted_index(self, weights) -> int:
        """One index drawn with probability proportional to ``weights``."""
        w = np.asarray(weights, dtype=float)
        cdf = np.cumsum(w)
        total = cdf[-1]
        if not total > 0:
            raise ValueError("weights must have positive total mass")
        idx = int(np.searchsorted(cdf, self.uniform() * total, side="right"))
        # guard against landing on a trailing zero-weight entry through rounding
        idx = min(idx, len(w) - 1)
        while w[idx] <= 0:
            idx -= 1
        return idx


def _as_point(a) -> np.ndarray:
    p = np.asarray(a, dtype=float)
    if p.ndim != 1:
        raise ValueError(f"a point must be one-dimensional, got shape {p.shape}")
    return p


def squared_euclidean(a, b) -> float:
    a, b = _as_point(a), _as_point(b)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape[0]} vs {b.shape[0]}")
    d = a - b
    return float(d @ d)


def pairwise_sq_distances(x, y=None) -> np.ndarray:
    """Matrix of squared Euclidean distances between rows of ``x`` and ``y``."""
    x = np.asarray(x, dtype=float)
    y = x if y is None else np.asarray(y, dtype=float)
    if x.shape[1] != y.shape[1]:
        raise ValueError(f"dimension mismatch: {x.shape[1]} vs {y.shape[1]}")
    # explicit differences rather than the |x|^2 - 2xy + |y|^2 expansion,
    # which loses exact zeros for coincident points
    diff = x[:, None, :] - y[None, :, :]
    return np.einsum("ijk,ijk->ij", diff, diff)


def pairwise_distances(x, y=None) -> np.ndarray:
    return np.sqrt(pairwise_sq_distances(x, y))


def symmetrize_upper(upper) -> np.ndarray:
    """Full symmetric matrix from an upper triangle (lower entries ignored)."""
    u = np.triu(np.asarray(upper, dtype=float))
    return u + np.triu(u, 1).T


def cholesky(sigma) -> np.ndarray:
    """Lower-triangular L with L @ L.T == sigma.

    Plain Cholesky-Banachiewicz; a non-positive pivot raises
    :class:`NotPositiveDefiniteError` naming the pivot index. No jitter.
    """
    s = np.asarray(sigma, dtype=float)
    if s.ndim != 2 or s.shape[0] != s.shape[1]:
        raise ValueError(f"covariance must be square, got shape {s.shape}")
    if not np.allclose(s, s.T, rtol=0.0, atol=SYMMETRY_TOL):
        raise ValueError("covariance matrix is not symmetric")
    n = s.shape[0]
    L = np.zeros_like(s)
    for i in range(n):
        for j in range(i + 1):
            acc = s[i, j] - L[i, :j] @ L[j, :j]
            if i == j:
                if not acc > 0:
                    raise NotPositiveDefiniteError(i, acc)
                L[i, i] = np.sqrt(acc)
            else:
                L[i, j] = acc / L[j, j]
    return L


def sample_mvn(mu, factor, rng: RandomSource, size: int | None = None) -> np.ndarray:
    """Draw ``mu + L z`` with ``z`` standard normal.

    With ``size`` given, returns ``size`` draws stacked as rows.
    """
    mu = _as_point(mu)
    L = np.asarray(factor, dtype=float)
    if L.shape != (mu.shape[0], mu.shape[0]):
        raise ValueError(
            f"dimension mismatch: mean has {mu.shape[0]} entries, factor is {L.shape}"
        )
    if size is None:
        return mu + L @ rng.standard_normal(mu.shape[0])
    z = rng.standard_normal((size, mu.shape[0]))
    return mu + z @ L.T


def mean_point(points) -> np.ndarray:
    p = np.asarray(points, dtype=float)
    if p.ndim != 2 or p.shape[0] == 0:
        raise ValueError("mean of an empty point set is undefined")
    return p.mean(axis=0)

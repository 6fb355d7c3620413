import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from amoc.datasets import builtin_spec
from amoc.numerics import (
    NotPositiveDefiniteError,
    RandomSource,
    cholesky,
    mean_point,
    sample_mvn,
    squared_euclidean,
)

finite = st.floats(-1e3, 1e3, allow_nan=False, allow_infinity=False)


def vectors(n):
    return st.lists(finite, min_size=n, max_size=n)


class TestSquaredEuclidean:
    @pytest.mark.parametrize(
        "a, b, expected",
        [((0, 0), (3, 4), 25.0), ((1, 2, 3), (1, 2, 3), 0.0), ((2, 3, 4), (7, 6, 9), 59.0)],
    )
    def test_examples(self, a, b, expected):
        assert squared_euclidean(a, b) == expected

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError, match="dimension"):
            squared_euclidean((1, 2), (1, 2, 3))

    @given(vectors(3), vectors(3))
    def test_symmetric_nonnegative(self, a, b):
        d = squared_euclidean(a, b)
        assert d == squared_euclidean(b, a)
        assert d >= 0
        assert (d == 0) == (a == b) or d < 1e-300

    @given(vectors(3), vectors(3), vectors(3))
    def test_triangle_inequality(self, a, b, c):
        ab = math.sqrt(squared_euclidean(a, b))
        bc = math.sqrt(squared_euclidean(b, c))
        ac = math.sqrt(squared_euclidean(a, c))
        assert ac <= ab + bc + 1e-9


class TestCholesky:
    def test_identity(self):
        np.testing.assert_array_equal(cholesky(np.eye(2)), np.eye(2))

    def test_two_by_two(self):
        L = cholesky([[1, 0.5], [0.5, 1]])
        np.testing.assert_allclose(L, [[1, 0], [0.5, math.sqrt(0.75)]], rtol=0, atol=1e-15)
        np.testing.assert_allclose(L @ L.T, [[1, 0.5], [0.5, 1]], rtol=1e-12)

    def test_not_pd_names_pivot(self):
        with pytest.raises(NotPositiveDefiniteError) as err:
            cholesky([[1, 2], [2, 1]])
        assert err.value.pivot == 1
        assert "pivot 1" in str(err.value)

    def test_rejects_asymmetric(self):
        with pytest.raises(ValueError, match="symmetric"):
            cholesky([[1, 0.5], [0.4, 1]])

    @pytest.mark.parametrize("spec_id", [1, 2, 3, 4, 5])
    def test_paper_covariances_reconstruct(self, spec_id):
        for comp in builtin_spec(spec_id).components:
            L = cholesky(comp.sigma)
            assert np.allclose(L, np.tril(L))
            assert np.all(np.diag(L) > 0)
            rel = np.linalg.norm(L @ L.T - comp.sigma) / np.linalg.norm(comp.sigma)
            assert rel < 1e-9


class _FixedNormals:
    def __init__(self, z):
        self.z = np.asarray(z, float)

    def standard_normal(self, size=None):
        return self.z


class TestSampleMvn:
    def test_zero_draw_is_mean(self):
        out = sample_mvn([5, 5], np.eye(2), _FixedNormals([0, 0]))
        np.testing.assert_array_equal(out, [5, 5])

    def test_identity_factor(self):
        out = sample_mvn([0, 0], np.eye(2), _FixedNormals([1, -1]))
        np.testing.assert_array_equal(out, [1, -1])

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            sample_mvn([0, 0, 0], np.eye(2), RandomSource(0))

    def test_mean_of_draws(self):
        comp = builtin_spec(1).components[0]
        draws = sample_mvn(comp.mu, cholesky(comp.sigma), RandomSource(11), size=10_000)
        bound = 4 * np.sqrt(np.diag(comp.sigma) / 10_000)
        assert np.all(np.abs(draws.mean(axis=0) - comp.mu) < bound)

    def test_sample_covariance(self):
        comp = builtin_spec(1).components[0]
        draws = sample_mvn(comp.mu, cholesky(comp.sigma), RandomSource(5), size=100_000)
        cov = np.cov(draws, rowvar=False)
        assert np.all(np.abs(cov - comp.sigma) <= 0.05 * np.abs(comp.sigma))


class TestMeanPoint:
    @pytest.mark.parametrize(
        "pts, expected",
        [([(0, 0), (2, 2)], (1, 1)), ([(1, 2, 3)], (1, 2, 3)), ([(0, 0), (0, 3), (3, 0)], (1, 1))],
    )
    def test_examples(self, pts, expected):
        np.testing.assert_allclose(mean_point(pts), expected)

    def test_empty(self):
        with pytest.raises(ValueError):
            mean_point(np.empty((0, 2)))


class TestRandomSource:
    def test_same_seed_same_bytes(self):
        a, b = RandomSource(42), RandomSource(42)
        assert a.uniform(50).tobytes() == b.uniform(50).tobytes()
        assert a.standard_normal(50).tobytes() == b.standard_normal(50).tobytes()
        assert a.sample_without_replacement(30, 10).tobytes() == b.sample_without_replacement(30, 10).tobytes()

    def test_children_are_reproducible_and_distinct(self):
        s1 = RandomSource.derive_seed(7, "kmeans", 0)
        assert s1 == RandomSource.derive_seed(7, "kmeans", 0)
        seeds = {RandomSource.derive_seed(7, algo, r) for algo in ("kmeans", "fcm") for r in range(50)}
        assert len(seeds) == 100
        a = RandomSource(RandomSource.derive_seed(7, "kmeans", 0)).uniform(1000)
        b = RandomSource(RandomSource.derive_seed(7, "kmeans", 1)).uniform(1000)
        assert abs(np.corrcoef(a, b)[0, 1]) < 0.1

    def test_weighted_index_skips_zero_weight(self):
        rng = RandomSource(1)
        draws = {rng.weighted_index([0, 1, 0, 3, 0]) for _ in range(500)}
        assert draws == {1, 3}

    @settings(max_examples=30)
    @given(st.integers(1, 40), st.data())
    def test_without_replacement_distinct(self, n, data):
        k = data.draw(st.integers(0, n))
        idx = RandomSource(n * 31 + k).sample_without_replacement(n, k)
        assert len(set(idx.tolist())) == k
        assert all(0 <= i < n for i in idx)

import numpy as np
import pytest

from amoc.datasets import (
    Dataset,
    GaussianSpec,
    SyntheticSpec,
    builtin_spec,
    generate,
    load_bundled,
    load_csv,
    split_counts,
    write_csv,
    zscore,
)
from amoc.numerics import RandomSource

# (m, n, k) printed in each dataset header; synthetic2 prints n=3 but its
# literals are two-dimensional, so the implemented n is 2.
TRANSCRIPTION = {
    1: (350, 3, 2),
    2: (400, 2, 4),
    3: (300, 2, 3),
    4: (800, 2, 6),
    5: (180, 8, 3),
}


@pytest.mark.parametrize("spec_id", sorted(TRANSCRIPTION))
def test_builtin_matches_transcription(spec_id):
    spec = builtin_spec(spec_id)
    m, n, k = TRANSCRIPTION[spec_id]
    assert (spec.m, spec.n, len(spec.components)) == (m, n, k)
    for comp in spec.components:
        np.testing.assert_array_equal(comp.sigma, comp.sigma.T)


def test_builtin_literals():
    s1 = builtin_spec(1)
    np.testing.assert_array_equal(s1.components[0].mu, [2, 3, 4])
    np.testing.assert_allclose(
        s1.components[1].sigma, [[1, 1, 1], [1, 2, 2], [1, 2, 3]]
    )
    s4 = builtin_spec(4)
    np.testing.assert_array_equal(s4.components[5].mu, [14, -14])
    s5 = builtin_spec(5)
    assert s5.components[2].sigma[0, 7] == -1
    assert s5.components[1].sigma[6, 7] == 7
    assert builtin_spec(2).declared["n"] == 3


def test_synthetic4_counts():
    assert [c.count for c in builtin_spec(4).components] == [134, 134, 133, 133, 133, 133]
    assert split_counts(7, 3) == [3, 2, 2]


@pytest.mark.parametrize("bad", [0, 6, "x"])
def test_builtin_out_of_range(bad):
    with pytest.raises(ValueError):
        builtin_spec(bad)


def test_generate_synthetic1():
    d = generate(builtin_spec(1), RandomSource(7))
    assert d.m == 350 and d.n == 3
    assert set(d.labels.tolist()) == {0, 1}
    # labels partition the index range into the component counts, in order
    np.testing.assert_array_equal(d.labels, np.repeat([0, 1], [175, 175]))


def test_generate_deterministic():
    a = generate(builtin_spec(3), RandomSource(99))
    b = generate(builtin_spec(3), RandomSource(99))
    assert a.points.tobytes() == b.points.tobytes()


def test_generate_single_component():
    spec = SyntheticSpec("one", (GaussianSpec(np.zeros(2), np.eye(2), 5),))
    d = generate(spec, RandomSource(0))
    assert d.m == 5
    assert d.labels.tolist() == [0] * 5


def test_generate_component_means():
    base = builtin_spec(3)
    big = SyntheticSpec(
        "s3big", tuple(GaussianSpec(c.mu, c.sigma, 10_000) for c in base.components)
    )
    d = generate(big, RandomSource(3))
    for idx, comp in enumerate(big.components):
        pts = d.points[d.labels == idx]
        bound = 3 * np.sqrt(np.diag(comp.sigma)) / np.sqrt(comp.count)
        assert np.all(np.abs(pts.mean(axis=0) - comp.mu) < bound)


def test_generate_rejects_non_pd():
    spec = SyntheticSpec("bad", (GaussianSpec(np.zeros(2), np.array([[1, 2], [2, 1]]), 3),))
    with pytest.raises(ValueError, match="positive definite"):
        generate(spec, RandomSource(0))


def test_bundled_iris_and_wine():
    iris = load_bundled("iris")
    assert (iris.m, iris.n, iris.n_classes) == (150, 4, 3)
    wine = load_bundled("wine")
    assert (wine.m, wine.n, wine.n_classes) == (178, 13, 3)


def test_load_csv_label_by_name_and_index(tmp_path):
    p = tmp_path / "d.csv"
    p.write_text("a,b,kind\n1,2,x\n3,4,y \n5,6,x\n")
    d = load_csv(p, label_column="kind")
    assert d.labels.tolist() == [0, 1, 0]
    assert d.feature_names == ("a", "b")
    d2 = load_csv(p, label_column=2)
    np.testing.assert_array_equal(d.points, d2.points)


def test_load_csv_first_appearance_encoding(tmp_path):
    p = tmp_path / "d.csv"
    p.write_text("1,9\n2,3\n3,9\n4,1\n")
    d = load_csv(p, label_column=1)
    assert d.labels.tolist() == [0, 1, 0, 2]
    assert d.feature_names is None


def test_load_csv_without_labels(tmp_path):
    p = tmp_path / "d.csv"
    p.write_text("1,2\n3,4\n5,6\n")
    d = load_csv(p)
    assert d.m == 3 and d.labels is None


def test_load_csv_errors(tmp_path):
    with pytest.raises(OSError, match="missing.csv"):
        load_csv(tmp_path / "missing.csv")
    p = tmp_path / "d.csv"
    p.write_text("a,b\n1,2\n3,oops\n")
    with pytest.raises(ValueError, match="row 3, column 1"):
        load_csv(p)
    with pytest.raises(ValueError, match="not found"):
        load_csv(p, label_column="nope")


def test_csv_round_trip(tmp_path):
    d = generate(builtin_spec(2), RandomSource(4))
    p = tmp_path / "s2.csv"
    write_csv(d, p)
    back = load_csv(p, label_column="label")
    np.testing.assert_allclose(back.points, d.points, rtol=0, atol=1e-12)
    np.testing.assert_array_equal(back.labels, d.labels)


def test_zscore():
    d = Dataset("z", np.array([[1, 5], [2, 5], [3, 5]], float), np.array([0, 1, 1]))
    z = zscore(d)
    np.testing.assert_allclose(z.points[:, 0], [-1, 0, 1])
    np.testing.assert_array_equal(z.points[:, 1], [0, 0, 0])
    np.testing.assert_array_equal(z.labels, d.labels)
    np.testing.assert_allclose(zscore(z).points, z.points, rtol=0, atol=1e-12)


def test_dataset_invariants():
    with pytest.raises(ValueError):
        Dataset("x", np.array([[1.0]]))
    with pytest.raises(ValueError):
        Dataset("x", np.array([[1.0], [np.nan]]))
    with pytest.raises(ValueError):
        Dataset("x", np.zeros((3, 1)), np.array([0, 2, 2]))

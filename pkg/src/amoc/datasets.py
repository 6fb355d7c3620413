"""Datasets: the built-in Gaussian-mixture benchmarks and CSV ingestion."""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from .numerics import RandomSource, cholesky, sample_mvn, symmetrize_upper


@dataclass(frozen=True)
class Dataset:
    name: str
    points: np.ndarray
    labels: np.ndarray | None = None
    feature_names: tuple[str, ...] | None = None

    def __post_init__(self):
        pts = np.array(self.points, dtype=float)
        if pts.ndim != 2:
            raise ValueError(f"points must be an m x n array, got shape {pts.shape}")
        if pts.shape[0] < 2:
            raise ValueError("a dataset needs at least two points")
        if not np.all(np.isfinite(pts)):
            raise ValueError("points contain NaN or infinite coordinates")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)
        if self.labels is not None:
            lab = np.array(self.labels, dtype=np.int64)
            if lab.shape != (pts.shape[0],):
                raise ValueError("labels must have one entry per point")
            if lab.min() != 0 or set(np.unique(lab)) != set(range(lab.max() + 1)):
                raise ValueError("labels must use every class id in 0..K-1")
            lab.setflags(write=False)
            object.__setattr__(self, "labels", lab)

    @property
    def m(self) -> int:
        return self.points.shape[0]

    @property
    def n(self) -> int:
        return self.points.shape[1]

    @property
    def n_classes(self) -> int | None:
        return None if self.labels is None else int(self.labels.max()) + 1


@dataclass(frozen=True)
class GaussianSpec:
    mu: np.ndarray
    sigma: np.ndarray
    count: int

    def __post_init__(self):
        mu = np.asarray(self.mu, dtype=float)
        sigma = np.asarray(self.sigma, dtype=float)
        if sigma.shape != (mu.shape[0], mu.shape[0]):
            raise ValueError("mean and covariance dimensions disagree")
        if self.count < 1:
            raise ValueError("component count must be positive")
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "sigma", sigma)


@dataclass(frozen=True)
class SyntheticSpec:
    name: str
    components: tuple[GaussianSpec, ...]
    declared: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if not self.components:
            raise ValueError("a synthetic spec needs at least one component")
        dims = {c.mu.shape[0] for c in self.components}
        if len(dims) != 1:
            raise ValueError(f"components disagree on dimension: {sorted(dims)}")

    @property
    def n(self) -> int:
        return self.components[0].mu.shape[0]

    @property
    def m(self) -> int:
        return sum(c.count for c in self.components)


def split_counts(m: int, k: int) -> list[int]:
    """Equal split of ``m`` over ``k`` components, remainder to the first ones."""
    base, extra = divmod(m, k)
    return [base + (1 if i < extra else 0) for i in range(k)]


def _diag(*values):
    return np.diag(values)


# Mean vectors and upper triangles of the five benchmark mixtures.
# `declared` holds the printed (m, n, k) headers; synthetic2's header says
# n=3 but every literal is two-dimensional.
_S5_SIGMA1 = [
    [1, 0.5, 0.3333, 0.25, 0.2, 0.1667, 0.1429, 0.125],
    [0, 1, 0.667, 0.5, 0.4, 0.3333, 0.2857, 0.25],
    [0, 0, 1, 0.75, 0.6, 0.5, 0.4286, 0.375],
    [0, 0, 0, 1, 0.8, 0.6667, 0.5714, 0.5],
    [0, 0, 0, 0, 1, 0.8333, 0.7143, 0.625],
    [0, 0, 0, 0, 0, 1, 0.8571, 0.75],
    [0, 0, 0, 0, 0, 0, 1, 0.875],
    [0, 0, 0, 0, 0, 0, 0, 1],
]
_S5_SIGMA2 = [[min(i, j) + 1 if j >= i else 0 for j in range(8)] for i in range(8)]
_S5_SIGMA3 = [
    [1, -1, -1, -1, -1, -1, -1, -1],
    [0, 2, 0, 0, 0, 0, 0, 0],
    [0, 0, 3, 1, 1, 1, 1, 1],
    [0, 0, 0, 4, 2, 2, 2, 2],
    [0, 0, 0, 0, 5, 3, 3, 3],
    [0, 0, 0, 0, 0, 6, 4, 4],
    [0, 0, 0, 0, 0, 0, 7, 5],
    [0, 0, 0, 0, 0, 0, 0, 8],
]

_BUILTIN = {
    1: {
        "declared": {"m": 350, "n": 3, "k": 2},
        "components": [
            ([2, 3, 4], [[1, 0.50, 0.3333], [0, 1, 0.6667], [0, 0, 1]]),
            ([7, 6, 9], [[1, 1, 1], [0, 2, 2], [0, 0, 3]]),
        ],
    },
    2: {
        "declared": {"m": 400, "n": 3, "k": 4},
        "components": [
            ([-1, -1], _diag(0.65, 0.65)),
            ([2, 2], [[1, 0.7], [0, 1]]),
            ([-3, 3], _diag(0.78, 0.78)),
            ([-6, 4], _diag(0.5, 0.5)),
        ],
    },
    3: {
        "declared": {"m": 300, "n": 2, "k": 3},
        "components": [
            ([-1, -1], _diag(1, 1)),
            ([2, 2], _diag(1, 1)),
            ([-3, 3], _diag(0.7, 0.7)),
        ],
    },
    4: {
        "declared": {"m": 800, "n": 2, "k": 6},
        "components": [
            ([-1, -1], _diag(0.65, 0.65)),
            ([-8, -6], [[1, 0.7], [0, 1]]),
            ([-3, 6], _diag(0.2, 0.2)),
            ([-8, 14], _diag(0.5, 0.5)),
            ([10, 12], _diag(0.3, 0.3)),
            ([14, -14], _diag(0.1, 0.1)),
        ],
    },
    5: {
        "declared": {"m": 180, "n": 8, "k": 3},
        "components": [
            ([1, 1, 2, 1, 0.5, 2, 1, 0.5], _S5_SIGMA1),
            ([1, 1, 1, 1, 1, 1, 1, 1], _S5_SIGMA2),
            ([1, -2, 0, -1, 0, -1, -2, -2], _S5_SIGMA3),
        ],
    },
}

BUILTIN_IDS = tuple(sorted(_BUILTIN))


def builtin_spec(spec_id: int) -> SyntheticSpec:
    try:
        entry = _BUILTIN[int(spec_id)]
    except (KeyError, ValueError):
        raise ValueError(
            f"unknown synthetic dataset {spec_id!r}; expected one of {BUILTIN_IDS}"
        ) from None
    comps = entry["components"]
    counts = split_counts(entry["declared"]["m"], len(comps))
    return SyntheticSpec(
        name=f"synthetic{spec_id}",
        components=tuple(
            GaussianSpec(np.asarray(mu, float), symmetrize_upper(upper), c)
            for (mu, upper), c in zip(comps, counts)
        ),
        declared=dict(entry["declared"]),
    )


def generate(spec: SyntheticSpec, rng: RandomSource) -> Dataset:
    """Sample every component in order; labels are component indices."""
    blocks, labels = [], []
    for idx, comp in enumerate(spec.components):
        L = cholesky(comp.sigma)
        blocks.append(sample_mvn(comp.mu, L, rng, size=comp.count))
        labels.append(np.full(comp.count, idx, dtype=np.int64))
    return Dataset(spec.name, np.vstack(blocks), np.concatenate(labels))


def encode_labels(raw) -> np.ndarray:
    """Re-encode arbitrary class values to 0..K-1 in order of first appearance."""
    mapping: dict = {}
    return np.array([mapping.setdefault(v, len(mapping)) for v in raw], dtype=np.int64)


def _is_number(text: str) -> bool:
    try:
        float(text)
    except ValueError:
        return False
    return True


def load_csv(path, label_column: str | int | None = None, name: str | None = None) -> Dataset:
    """Read a comma-delimited numeric table.

    A header is assumed when any non-label cell of the first row fails to
    parse as a number.  ``label_column`` is a header name or a 0-based index.
    """
    path = Path(path)
    try:
        with path.open(newline="", encoding="utf-8") as fh:
            rows = [
                [cell.strip() for cell in row]
                for row in csv.reader(fh)
                if row and any(cell.strip() for cell in row)
            ]
    except OSError as exc:
        raise OSError(f"cannot read dataset file {path}: {exc.strerror}") from exc
    if not rows:
        raise ValueError(f"{path}: file is empty")

    width = len(rows[0])
    label_idx = None
    if isinstance(label_column, int) or (
        isinstance(label_column, str) and label_column.isdigit()
    ):
        label_idx = int(label_column)
        if not 0 <= label_idx < width:
            raise ValueError(f"{path}: label column {label_idx} out of range (width {width})")

    first = rows[0]
    has_header = any(
        not _is_number(cell) for j, cell in enumerate(first) if j != label_idx
    )
    header = None
    if has_header:
        header = first
        rows = rows[1:]
    if label_column is not None and label_idx is None:
        if header is None or label_column not in header:
            raise ValueError(f"{path}: label column {label_column!r} not found")
        label_idx = header.index(label_column)

    feature_idx = [j for j in range(width) if j != label_idx]
    data = np.empty((len(rows), len(feature_idx)))
    raw_labels = []
    line_offset = 2 if has_header else 1
    for i, row in enumerate(rows):
        if len(row) != width:
            raise ValueError(
                f"{path}: row {i + line_offset} has {len(row)} fields, expected {width}"
            )
        for out_j, j in enumerate(feature_idx):
            try:
                data[i, out_j] = float(row[j])
            except ValueError:
                raise ValueError(
                    f"{path}: non-numeric value {row[j]!r} at row {i + line_offset}, column {j}"
                ) from None
        if label_idx is not None:
            raw_labels.append(row[label_idx])

    labels = encode_labels(raw_labels) if label_idx is not None else None
    names = tuple(header[j] for j in feature_idx) if header else None
    return Dataset(name or path.stem, data, labels, names)


def write_csv(dataset: Dataset, path, label_name: str = "label") -> None:
    """Inverse of :func:`load_csv`; labels go in a trailing column."""
    names = dataset.feature_names or tuple(f"x{j + 1}" for j in range(dataset.n))
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(list(names) + ([label_name] if dataset.labels is not None else []))
        for i, row in enumerate(dataset.points):
            cells = [repr(float(v)) for v in row]
            if dataset.labels is not None:
                cells.append(str(int(dataset.labels[i])))
            w.writerow(cells)


BUNDLED = ("iris", "wine")


def load_bundled(name: str) -> Dataset:
    """UCI iris or wine, shipped with the package (class column ``class``)."""
    if name not in BUNDLED:
        raise ValueError(f"no bundled dataset {name!r}; available: {BUNDLED}")
    ref = resources.files("amoc") / "data" / f"{name}.csv"
    with resources.as_file(ref) as p:
        return load_csv(p, label_column="class", name=name)


def resolve_dataset(
    spec: str, label_column: str | int | None = None, seed: int = 0
) -> Dataset:
    """Turn a CLI dataset argument into a Dataset.

    Accepts ``synthetic1``..``synthetic5`` (generated from ``seed``), a bundled
    name (``iris``, ``wine``), or a path to a CSV file.
    """
    key = spec.strip().lower()
    if key.startswith("synthetic") and key[len("synthetic"):].isdigit():
        sid = int(key[len("synthetic"):])
        return generate(builtin_spec(sid), RandomSource(seed))
    if key in BUNDLED:
        return load_bundled(key)
    path = Path(spec)
    if not path.exists():
        raise FileNotFoundError(f"dataset file not found: {path}")
    return load_csv(path, label_column=label_column)


def zscore(dataset: Dataset) -> Dataset:
    x = dataset.points
    mean = x.mean(axis=0)
    sd = x.std(axis=0, ddof=1)
    safe = np.where(sd > 0, sd, 1.0)
    z = (x - mean) / safe
    z[:, sd == 0] = 0.0
    return Dataset(dataset.name, z, dataset.labels, dataset.feature_names)


def default_kmax(m: int) -> int:
    return max(2, int(math.floor(math.sqrt(m) + 0.5)))

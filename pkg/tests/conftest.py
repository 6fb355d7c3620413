import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from amoc.datasets import Dataset  # noqa: E402


@pytest.fixture
def two_pairs():
    """1-D clusters {0, 1} and {10, 11}."""
    return Dataset("pairs", np.array([[0.0], [1.0], [10.0], [11.0]]), np.array([0, 0, 1, 1]))


@pytest.fixture
def blobs():
    """Three tight, well separated 2-D blobs of 20 points each."""
    rng = np.random.default_rng(3)
    centers = np.array([[0.0, 0.0], [20.0, 0.0], [0.0, 20.0]])
    pts = np.vstack([c + 0.3 * rng.standard_normal((20, 2)) for c in centers])
    return Dataset("blobs", pts, np.repeat(np.arange(3), 20))

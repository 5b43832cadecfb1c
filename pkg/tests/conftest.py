import numpy as np
import pytest

from srland.analyzer.graph import build_spatial_affinity, to_markov
from srland.models.types import GroundTruth, ImageCube


def two_blob_scene(seed: int = 0, side: int = 16, bands: int = 3, separation: float = 10.0,
                   noise: float = 0.1):
    """Left half class 1, right half class 2, class means `separation` apart per band."""
    rng = np.random.default_rng(seed)
    labels = np.ones((side, side), dtype=np.int64)
    labels[:, side // 2:] = 2
    means = np.stack([np.zeros(bands), np.full(bands, separation)])
    points = means[labels.reshape(-1) - 1] + noise * rng.standard_normal((side * side, bands))
    return ImageCube(side, side, points), GroundTruth.from_array(labels)


@pytest.fixture
def two_blobs():
    return two_blob_scene()


@pytest.fixture
def random_cube():
    rng = np.random.default_rng(7)
    return ImageCube(6, 6, rng.standard_normal((36, 4)))


@pytest.fixture
def small_chain(random_cube):
    return to_markov(build_spatial_affinity(random_cube, 1.5))


def line_cube(values):
    """A 1 x n cube whose single band holds `values`."""
    values = np.asarray(values, dtype=float)
    return ImageCube(1, values.size, values[:, None])

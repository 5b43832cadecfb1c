import numpy as np
import pytest
from scipy.spatial.distance import cdist

from conftest import line_cube
from srland.analyzer.density import adaptive_bandwidth, estimate_density, kde, spectral_knn
from srland.exceptions import ParameterError
from srland.models.types import ImageCube
from srland.utils.helpers import knn_table


def test_neighbours_exclude_self_and_are_sorted():
    table = spectral_knn(line_cube([0.0, 1.0, 3.0, 6.0]), k=2)
    np.testing.assert_array_equal(table.indices[0], [1, 2])
    np.testing.assert_allclose(table.distances[0], [1.0, 3.0])
    np.testing.assert_array_equal(table.indices[3], [2, 1])
    assert not np.any(table.indices == np.arange(4)[:, None])


def test_neighbour_count_is_clamped_to_n_minus_one():
    table = spectral_knn(line_cube([0.0, 1.0, 3.0, 6.0]), k=100)
    assert table.k == 3


def test_bandwidth_is_half_the_mean_neighbour_distance():
    table = spectral_knn(line_cube([0.0, 1.0, 3.0, 6.0]), k=1)
    # nearest distances 1, 1, 2, 3
    assert adaptive_bandwidth(table) == pytest.approx(0.5 * 7 / 4)


def test_density_matches_direct_sum(random_cube):
    profile = estimate_density(random_cube, k=5)
    X = random_cube.points
    d = np.sqrt(((X[:, None, :] - X[None, :, :]) ** 2).sum(-1))
    np.fill_diagonal(d, np.inf)
    nearest = np.sort(d, axis=1)[:, :5]
    raw = np.exp(-(nearest / profile.bandwidth) ** 2).sum(axis=1)
    np.testing.assert_allclose(profile.p, raw / raw.sum(), rtol=1e-12)
    assert profile.bandwidth == pytest.approx(0.5 * nearest.mean())


def test_density_is_a_positive_distribution_peaking_in_the_cluster():
    cube = line_cube([0.0, 0.1, 0.2, 0.3, 5.0, 9.0])
    p = estimate_density(cube, k=2).p
    assert p.sum() == pytest.approx(1.0)
    assert np.all(p > 0)
    assert np.argmax(p) in (1, 2)
    assert p[5] < p[0]


def test_duplicate_spectra_need_noise():
    with pytest.raises(ParameterError, match='noise'):
        estimate_density(ImageCube(2, 2, np.ones((4, 3))), k=2)


def test_invalid_neighbour_count_and_bandwidth():
    cube = line_cube([0.0, 1.0, 2.0])
    with pytest.raises(ParameterError):
        spectral_knn(cube, k=0)
    with pytest.raises(ParameterError):
        spectral_knn(line_cube([1.0]), k=1)
    with pytest.raises(ParameterError):
        kde(cube, spectral_knn(cube, 1), 0.0)


def _lexsort_neighbours(X, k):
    """Linear-scan k-NN: every other point ordered by (distance, index)."""
    d = cdist(X, X)
    rows = []
    for i in range(X.shape[0]):
        others = np.delete(np.arange(X.shape[0]), i)
        rows.append(others[np.lexsort((others, d[i, others]))][:k])
    return np.array(rows)


def test_lattice_ties_resolve_to_the_lower_index():
    rng = np.random.default_rng(0)
    for _ in range(30):
        X = rng.integers(0, 3, size=(400, 2)).astype(float)
        indices, distances = knn_table(X, 10)
        np.testing.assert_array_equal(indices, _lexsort_neighbours(X, 10))
        np.testing.assert_array_equal(distances, np.sort(distances, axis=1))


def test_spectral_knn_matches_linear_scan_on_random_queries():
    rng = np.random.default_rng(4)
    cube = ImageCube(20, 25, rng.standard_normal((500, 6)))
    table = spectral_knn(cube, k=12)
    expected = _lexsort_neighbours(cube.points, 12)
    for i in rng.choice(cube.n, size=100, replace=False):
        np.testing.assert_array_equal(table.indices[i], expected[i])
        np.testing.assert_allclose(table.distances[i],
                                   np.linalg.norm(cube.points[expected[i]] - cube.points[i], axis=1),
                                   rtol=1e-12)


def test_spectral_knn_ties_on_a_repeated_band_value():
    # four equal middle values tie at every row; the lower indices win
    table = spectral_knn(line_cube([0.0, 1.0, 1.0, 1.0, 1.0, 2.0]), k=2)
    np.testing.assert_array_equal(table.indices[0], [1, 2])
    np.testing.assert_array_equal(table.indices[5], [1, 2])
    np.testing.assert_array_equal(table.indices[3], [1, 2])

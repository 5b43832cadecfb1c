"""
Gaussian KDE over spectral nearest neighbours with a data-driven bandwidth.
"""
import logging
from typing import NamedTuple

import numpy as np

from srland.exceptions import NumericalError, ParameterError
from srland.models.types import DensityProfile, ImageCube
from srland.utils.helpers import knn_table

logger = logging.getLogger(__name__)

DEFAULT_KDE_K = 100


class NeighborTable(NamedTuple):
    indices: np.ndarray  # (n, k), nearest first
    distances: np.ndarray  # (n, k)

    @property
    def k(self) -> int:
        return self.indices.shape[1]


def spectral_knn(cube: ImageCube, k: int = DEFAULT_KDE_K) -> NeighborTable:
    """Exact spectral k-NN of every pixel, self excluded; k is clamped to n - 1."""
    n = cube.n
    if k < 1:
        raise ParameterError(f"KDE neighbour count must be positive, got {k}")
    if n < 2:
        raise ParameterError("density estimation needs at least two points")
    k = min(k, n - 1)
    return NeighborTable(*knn_table(cube.points, k))


def adaptive_bandwidth(table: NeighborTable) -> float:
    """Half the mean distance between points and their listed neighbours."""
    if table.distances.size == 0:
        raise ParameterError("neighbour table is empty")
    sigma0 = 0.5 * float(np.mean(table.distances))
    if sigma0 == 0.0:
        raise ParameterError(
            "every point coincides with its neighbours so the KDE bandwidth is 0; "
            "inject noise (--noise-variance) to separate duplicate spectra")
    return sigma0


def kde(cube: ImageCube, table: NeighborTable, sigma0: float) -> DensityProfile:
    if sigma0 <= 0:
        raise ParameterError(f"KDE bandwidth must be positive, got {sigma0}")
    raw = np.exp(-(table.distances / sigma0) ** 2).sum(axis=1)
    if not np.isfinite(raw).all():
        raise NumericalError("kernel density estimate produced non-finite values")
    total = raw.sum()
    if total <= 0:
        raise NumericalError("kernel density estimate vanished at every point")
    p = raw / total
    p = np.maximum(p, np.finfo(np.float64).tiny)
    logger.info("density: k=%d sigma0=%.4g p in [%.3g, %.3g]", table.k, sigma0, p.min(), p.max())
    return DensityProfile(p, sigma0, table.k)


def estimate_density(cube: ImageCube, k: int = DEFAULT_KDE_K) -> DensityProfile:
    table = spectral_knn(cube, k)
    return kde(cube, table, adaptive_bandwidth(table))

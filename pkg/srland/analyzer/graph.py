"""
Weighted graphs over the pixel cloud and their random-walk normalization.

Spatial mode links pixels within grid distance r; knn mode links spectral
nearest neighbours. Both use the Gaussian kernel exp(-|x_i - x_j|^2 / sigma^2)
and keep self-loops of weight 1.
"""
import logging
import math
from typing import Optional, Tuple

import numpy as np
import scipy.sparse
from scipy.sparse import csgraph

from srland.exceptions import ConnectivityError, ParameterError
from srland.models.types import ImageCube, MarkovChain, SparseAffinity
from srland.utils.helpers import ball_offsets, knn_table
from srland.utils.helpers import spatial_ball as _spatial_ball

logger = logging.getLogger(__name__)

_TINY = np.finfo(np.float64).tiny


def spatial_ball(shape, i: int, r: float) -> np.ndarray:
    if r < 1:
        raise ParameterError(f"spatial radius must be at least 1, got {r}")
    height, width = shape
    if not 0 <= i < height * width:
        raise ParameterError(f"point index {i} outside a {height}x{width} grid")
    return _spatial_ball(shape, i, r)


def default_graph_neighbors(n: int) -> int:
    return max(1, min(n - 1, math.ceil(math.log2(max(n, 2)))))


def _resolve_sigma(dist: np.ndarray, sigma: Optional[float]) -> float:
    if sigma is not None:
        if sigma <= 0:
            raise ParameterError(f"kernel bandwidth sigma must be positive, got {sigma}")
        return float(sigma)
    if dist.size == 0:
        return 1.0
    sigma = float(np.mean(dist))
    if sigma == 0.0:
        raise ParameterError(
            "all graph edges join identical spectra so the default sigma is 0; "
            "inject noise (--noise-variance) or pass --sigma")
    return sigma


def _assemble(n: int, rows: np.ndarray, cols: np.ndarray, d2: np.ndarray,
              sigma: Optional[float]) -> Tuple[scipy.sparse.csr_matrix, float]:
    off = rows != cols
    sigma = _resolve_sigma(np.sqrt(d2[off]), sigma)
    weights = np.maximum(np.exp(-d2 / sigma ** 2), _TINY)
    W = scipy.sparse.csr_matrix((weights, (rows, cols)), shape=(n, n))
    W.sort_indices()
    return W, sigma


def build_spatial_affinity(cube: ImageCube, r: float, sigma: Optional[float] = None) -> SparseAffinity:
    """Gaussian weights between pixels within grid distance r of each other."""
    if r < 1:
        raise ParameterError(f"spatial radius must be at least 1, got {r}")
    X = cube.points
    height, width = cube.shape
    idx = np.arange(cube.n)
    prow, pcol = np.divmod(idx, width)
    rows, cols, d2 = [], [], []
    for dr, dc in ball_offsets(r):
        ok = (prow + dr >= 0) & (prow + dr < height) & (pcol + dc >= 0) & (pcol + dc < width)
        i = idx[ok]
        j = i + dr * width + dc
        diff = X[i] - X[j]
        rows.append(i)
        cols.append(j)
        d2.append(np.einsum('ij,ij->i', diff, diff))
    rows, cols, d2 = np.concatenate(rows), np.concatenate(cols), np.concatenate(d2)
    W, sigma = _assemble(cube.n, rows, cols, d2, sigma)
    logger.info("spatial graph: n=%d r=%s nnz=%d sigma=%.4g", cube.n, r, W.nnz, sigma)
    return SparseAffinity(W, sigma, 'spatial', radius=r)


def build_spectral_affinity(cube: ImageCube, k_graph: Optional[int] = None,
                            sigma: Optional[float] = None) -> SparseAffinity:
    """Gaussian weights on the symmetrized spectral k_graph-NN graph."""
    n = cube.n
    if k_graph is None:
        k_graph = default_graph_neighbors(n)
    if not 1 <= k_graph < n:
        raise ParameterError(f"graph neighbour count must lie in [1, {n - 1}], got {k_graph}")
    X = cube.points
    nbrs, _ = knn_table(X, k_graph)
    src = np.repeat(np.arange(n), k_graph)
    dst = nbrs.reshape(-1)
    pattern = scipy.sparse.csr_matrix((np.ones(src.size), (src, dst)), shape=(n, n))
    pattern = (pattern + pattern.T + scipy.sparse.identity(n, format='csr')).tocoo()
    rows, cols = pattern.row, pattern.col
    diff = X[rows] - X[cols]
    d2 = np.einsum('ij,ij->i', diff, diff)
    W, sigma = _assemble(n, rows, cols, d2, sigma)
    logger.info("knn graph: n=%d k=%d nnz=%d sigma=%.4g", n, k_graph, W.nnz, sigma)
    return SparseAffinity(W, sigma, 'knn', k_graph=k_graph)


def to_markov(affinity: SparseAffinity) -> MarkovChain:
    """P = D^{-1} W with stationary distribution pi_i = d_i / sum(d)."""
    W = affinity.weights.tocsr()
    n = W.shape[0]
    degrees = np.asarray(W.sum(axis=1)).ravel()
    if (degrees <= 0).any():
        bad = int(np.flatnonzero(degrees <= 0)[0])
        raise ConnectivityError(f"vertex {bad} has no positive weight", components=0, vertex=bad)
    if n > 1:
        off_diag = np.diff(W.indptr) - (W.diagonal() != 0)
        isolated = np.flatnonzero(off_diag == 0)
        if isolated.size:
            v = int(isolated[0])
            raise ConnectivityError(f"vertex {v} is isolated", vertex=v)
        components, _ = csgraph.connected_components(W, directed=False)
        if components > 1:
            raise ConnectivityError(f"graph is disconnected into {components} components",
                                    components=components)
    P = scipy.sparse.diags(1.0 / degrees) @ W
    P = P.tocsr()
    P.sort_indices()
    stationary = degrees / degrees.sum()
    return MarkovChain(W, P, degrees, stationary)

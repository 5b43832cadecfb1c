"""
Cluster-mode detection: density times diffusion distance to the nearest denser point.
"""
import logging
import math
from typing import NamedTuple, Optional, Tuple

import numpy as np

from srland.exceptions import ParameterError
from srland.models.types import DensityProfile, ModeSet
from srland.analyzer.spectral import dt_neighbor_table
from srland.utils.helpers import WideningSearch, row_distances

logger = logging.getLogger(__name__)

NEIGHBOR_FACTOR = 4


def default_scan_count(n: int) -> int:
    return max(1, min(n - 1, NEIGHBOR_FACTOR * math.ceil(math.log2(max(n, 2)))))


def density_order(p: np.ndarray) -> np.ndarray:
    """Point indices by decreasing density, ties to the lower index."""
    return np.lexsort((np.arange(p.shape[0]), -p))


def density_values(p) -> np.ndarray:
    return p.p if isinstance(p, DensityProfile) else np.asarray(p, dtype=np.float64)


class RhoResult(NamedTuple):
    rho: np.ndarray
    raw: np.ndarray
    fallback_count: int


def compute_rho(E: np.ndarray, p, scan_count: Optional[int] = None,
                neighbors: Optional[Tuple[np.ndarray, np.ndarray]] = None) -> RhoResult:
    """Normalized distance from each point to its nearest point of at least its density.

    The densest point (ties to the lower index)
    takes its largest distance to any point instead. Each point first scans its
    `scan_count` nearest embedding neighbours (or the rows of `neighbors`).
    Points that find nothing dense enough there are batched through a widening
    ball-tree search, and only those still open at its limit get a full scan,
    so the result is always exact.
    """
    p = density_values(p)
    n = E.shape[0]
    if p.shape[0] != n:
        raise ParameterError(f"density has {p.shape[0]} entries but the embedding has {n} rows")
    rho_raw = np.zeros(n)
    if n == 1:
        return RhoResult(np.ones(1), np.zeros(1), 0)
    peak = int(density_order(p)[0])
    if neighbors is None:
        scan_count = default_scan_count(n) if scan_count is None else min(max(1, scan_count), n - 1)
        neighbors = dt_neighbor_table(E, scan_count)
    nbrs, dists = neighbors
    scan_count = nbrs.shape[1]
    denser = p[nbrs] >= p[:, None]
    hit = denser.any(axis=1)
    first = np.argmax(denser, axis=1)
    rho_raw[hit] = dists[hit, first[hit]]
    rho_raw[peak] = row_distances(E, peak, np.arange(n)).max()

    misses = np.flatnonzero(~hit)
    misses = misses[misses != peak]
    exhaustive = np.empty(0, dtype=np.int64)
    if misses.size:
        def at_least_as_dense(rows, cand):
            return (p[cand] >= p[rows][:, None]) & (cand != rows[:, None])

        _, found_d, settled = WideningSearch(E).nearest(misses, at_least_as_dense, 2 * (scan_count + 1))
        rho_raw[misses[settled]] = found_d[settled]
        exhaustive = misses[~settled]
    for i in exhaustive:
        cand = np.flatnonzero(p >= p[i])
        cand = cand[cand != i]
        rho_raw[i] = row_distances(E, i, cand).min()
    fallback = int(misses.size)

    top = rho_raw[peak]
    if top > 0:
        rho = rho_raw / top
    else:
        rho = np.zeros(n)
    rho[peak] = 1.0
    logger.info("rho: %d of %d points missed their %d-neighbour scan, %d needed a full scan",
                fallback, n, scan_count, exhaustive.size)
    return RhoResult(rho, rho_raw, fallback)


def compute_rho_bruteforce(E: np.ndarray, p) -> np.ndarray:
    """Unnormalized rho by a direct double loop; the reference for compute_rho."""
    p = density_values(p)
    n = E.shape[0]
    peak = int(density_order(p)[0])
    out = np.zeros(n)
    for i in range(n):
        dist = row_distances(E, i, np.arange(n))
        if i == peak:
            out[i] = dist.max()
            continue
        mask = p >= p[i]
        mask[i] = False
        out[i] = dist[mask].min()
    return out


def detect_modes(p, rho: np.ndarray, M: int, fallback_count: int = 0) -> ModeSet:
    """The M largest values of p * rho, descending, ties to the lower index."""
    p = density_values(p)
    n = p.shape[0]
    if not 1 <= M <= n:
        raise ParameterError(f"number of modes must lie in [1, {n}], got {M}")
    scores = p * rho
    ranked = np.lexsort((np.arange(n), -scores))[:M]
    return ModeSet(ranked, p, rho, scores, fallback_count)

"""
Two-stage label propagation in order of decreasing density.

Stage 1 copies the label of the diffusion-nearest denser labeled point unless
the spatial neighbourhood agrees on a different label, in which case the
point is deferred. Stage 2 settles deferred points, consensus first.
"""
import logging
from typing import Optional, Tuple

import numpy as np

from srland.exceptions import ParameterError
from srland.models.types import LabeledSet, LabelMap
from srland.analyzer.modes import density_values, default_scan_count, density_order
from srland.analyzer.spectral import dt_neighbor_table
from srland.utils.helpers import WideningSearch, ball_offsets, row_distances

logger = logging.getLogger(__name__)

SEED = 'seed'
STAGE1 = 'stage1'
STAGE2_CONSENSUS = 'stage2-consensus'
STAGE2_NN = 'stage2-nn'
STAGE2_GLOBAL = 'stage2-global'

DEFAULT_CONSENSUS_THRESHOLD = 0.5


def _neighborhood(shape: Tuple[int, int], i: int, offsets: np.ndarray) -> np.ndarray:
    height, width = shape
    row, col = divmod(i, width)
    rows = row + offsets[:, 0]
    cols = col + offsets[:, 1]
    ok = (rows >= 0) & (rows < height) & (cols >= 0) & (cols < width)
    members = rows[ok] * width + cols[ok]
    return members[members != i]


def _majority(labels: np.ndarray, threshold: float) -> Optional[int]:
    labels = labels[labels > 0]
    if labels.size == 0:
        return None
    counts = np.bincount(labels)
    top = int(np.argmax(counts))
    if counts[top] / labels.size > threshold:
        return top
    return None


def consensus_label(labels: np.ndarray, shape: Tuple[int, int], i: int, r: float,
                    threshold: float = DEFAULT_CONSENSUS_THRESHOLD) -> Optional[int]:
    """Label held by more than `threshold` of the labeled pixels in B_r(i) minus i, else None."""
    members = _neighborhood(shape, i, ball_offsets(r))
    return _majority(np.asarray(labels)[members], threshold)


class TwoStageLabeler:
    def __init__(self, shape: Tuple[int, int], radius: float,
                 threshold: float = DEFAULT_CONSENSUS_THRESHOLD,
                 use_consensus: bool = True, scan_count: Optional[int] = None):
        if not 0 <= threshold < 1:
            raise ParameterError(f"consensus threshold must lie in [0, 1), got {threshold}")
        if radius < 1:
            raise ParameterError(f"consensus radius must be at least 1, got {radius}")
        self.shape = shape
        self.radius = radius
        self.threshold = threshold
        self.use_consensus = use_consensus
        self.scan_count = scan_count
        self._offsets = ball_offsets(radius)

    def label(self, seeds: LabeledSet, p, E: np.ndarray,
              neighbors: Optional[Tuple[np.ndarray, np.ndarray]] = None) -> LabelMap:
        """Label every point; `neighbors` is an optional precomputed D_t neighbour table."""
        p = density_values(p)
        n = E.shape[0]
        if p.shape[0] != n:
            raise ParameterError(f"density has {p.shape[0]} entries but the embedding has {n} rows")
        if n != self.shape[0] * self.shape[1]:
            raise ParameterError(f"{n} points do not fill a {self.shape[0]}x{self.shape[1]} grid")
        if len(seeds) == 0:
            raise ParameterError("label propagation needs at least one labeled seed")

        order = density_order(p)
        self._rank = np.empty(n, dtype=np.int64)
        self._rank[order] = np.arange(n)
        self._E = E
        self._search = None
        self._labels = np.zeros(n, dtype=np.int64)
        # best (lowest) density rank held by any labeled point
        self._top_rank = n
        provenance = np.full(n, '', dtype=object)
        for i, y in seeds:
            if y <= 0:
                raise ParameterError(f"seed {i} carries invalid label {y}")
            self._assign(i, y)
            provenance[i] = SEED

        if neighbors is None and n > 1:
            count = default_scan_count(n) if self.scan_count is None else self.scan_count
            neighbors = dt_neighbor_table(E, count)
        self._nbrs = neighbors[0] if n > 1 else np.empty((n, 0), dtype=np.int64)

        deferred = 0
        for i in order:
            if self._labels[i]:
                continue
            purported = self._nearest_denser_label(i)
            if purported is None:
                deferred += 1
                continue
            if self.use_consensus:
                agreed = self._consensus(i)
                if agreed is not None and agreed != purported:
                    deferred += 1
                    continue
            self._assign(i, purported)
            provenance[i] = STAGE1
        logger.info("stage 1 deferred %d of %d points", deferred, n)

        for i in order:
            if self._labels[i]:
                continue
            agreed = self._consensus(i) if self.use_consensus else None
            if agreed is not None:
                self._assign(i, agreed)
                provenance[i] = STAGE2_CONSENSUS
                continue
            purported = self._nearest_denser_label(i)
            if purported is not None:
                self._assign(i, purported)
                provenance[i] = STAGE2_NN
            else:
                self._assign(i, self._nearest_label(i))
                provenance[i] = STAGE2_GLOBAL

        return LabelMap(self._labels.copy(), provenance, deferred, *self.shape)

    def _assign(self, i: int, y: int):
        self._labels[i] = y
        self._top_rank = min(self._top_rank, int(self._rank[i]))

    def _consensus(self, i: int) -> Optional[int]:
        members = _neighborhood(self.shape, i, self._offsets)
        return _majority(self._labels[members], self.threshold)

    def _nearest_denser_label(self, i: int) -> Optional[int]:
        """Label of the D_t-nearest labeled point ranked above i in density order."""
        rank = self._rank[i]
        if self._top_rank >= rank:
            return None
        near = self._nbrs[i]
        ok = (self._labels[near] > 0) & (self._rank[near] < rank)
        if ok.any():
            return int(self._labels[near[np.argmax(ok)]])

        def labeled_above(rows, cand):
            return (self._labels[cand] > 0) & (self._rank[cand] < rank)

        found = self._widen(i, labeled_above)
        if found is not None:
            return found
        return self._closest(i, np.flatnonzero((self._labels > 0) & (self._rank < rank)))

    def _nearest_label(self, i: int) -> int:
        def labeled(rows, cand):
            return self._labels[cand] > 0

        found = self._widen(i, labeled)
        if found is not None:
            return found
        return self._closest(i, np.flatnonzero(self._labels > 0))

    def _widen(self, i: int, accept) -> Optional[int]:
        """Label found by a widening neighbour search, or None if it stopped short."""
        if self._search is None:
            self._search = WideningSearch(self._E)
        found, _, settled = self._search.nearest(np.array([i]), accept, 2 * (self._nbrs.shape[1] + 1))
        if not settled[0] or found[0] < 0:
            return None
        return int(self._labels[found[0]])

    def _closest(self, i: int, cand: np.ndarray) -> int:
        dist = row_distances(self._E, i, cand)
        return int(self._labels[cand[np.lexsort((cand, dist))[0]]])


def two_stage_label(seeds: LabeledSet, p, E: np.ndarray, shape: Tuple[int, int], r: float,
                    threshold: float = DEFAULT_CONSENSUS_THRESHOLD,
                    use_consensus: bool = True) -> LabelMap:
    return TwoStageLabeler(shape, r, threshold, use_consensus).label(seeds, p, E)

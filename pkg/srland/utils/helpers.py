"""
Grid geometry and exact nearest-neighbour helpers shared by the analyzers.
"""
import math
from typing import Callable, Tuple

import numpy as np
from sklearn.neighbors import NearestNeighbors

# candidate entries handled per query block
_BLOCK = 1 << 16
_TIE_RTOL = 1e-9
_TIE_ATOL = 1e-12
WIDEN_LIMIT = 4096


def grid_coord(i: int, width: int) -> Tuple[int, int]:
    return i // width, i % width



def ball_offsets(r: float) -> np.ndarray:
    """(dr, dc) offsets with dr^2 + dc^2 <= r^2, origin included, in raster order."""
    reach = int(math.floor(r))
    dr, dc = np.mgrid[-reach:reach + 1, -reach:reach + 1]
    keep = dr ** 2 + dc ** 2 <= r * r
    return np.column_stack([dr[keep], dc[keep]])


def spatial_ball(shape: Tuple[int, int], i: int, r: float) -> np.ndarray:
    """Flat indices within Euclidean grid distance r of pixel i (itself included), ascending."""
    height, width = shape
    row, col = grid_coord(i, width)
    offsets = ball_offsets(r)
    rows = row + offsets[:, 0]
    cols = col + offsets[:, 1]
    ok = (rows >= 0) & (rows < height) & (cols >= 0) & (cols < width)
    return np.sort(rows[ok] * width + cols[ok])


def row_distances(X: np.ndarray, i: int, idx: np.ndarray) -> np.ndarray:
    """Euclidean distances from X[i] to X[idx], evaluated by direct differences."""
    diff = X[idx] - X[i]
    return np.sqrt(np.einsum('ij,ij->i', diff, diff))


def _direct_distances(X: np.ndarray, rows: np.ndarray, cand: np.ndarray) -> np.ndarray:
    diff = X[cand] - X[rows][:, None, :]
    return np.sqrt(np.einsum('ijk,ijk->ij', diff, diff))


def _closed(inner: np.ndarray, outer: np.ndarray) -> np.ndarray:
    """True where `outer` lies clearly beyond `inner`, so no unlisted point can tie it."""
    return outer > inner * (1.0 + _TIE_RTOL) + _TIE_ATOL


def knn_table(X: np.ndarray, k: int, algorithm: str = 'auto') -> Tuple[np.ndarray, np.ndarray]:
    """Exact k nearest neighbours of every row of X, self excluded.

    Candidates come from scikit-learn; distances are then recomputed from
    direct differences and each row is sorted by (distance, index). A row
    whose k-th distance is matched by the farthest candidate is queried
    again with twice as many candidates until the tie is closed, so ties
    always resolve to the lower index.
    """
    n = X.shape[0]
    k = int(min(k, n - 1))
    if k < 1:
        return np.empty((n, 0), dtype=np.int64), np.empty((n, 0))
    search = NearestNeighbors(algorithm=algorithm).fit(X)
    indices = np.empty((n, k), dtype=np.int64)
    distances = np.empty((n, k))
    pending = np.arange(n)
    width = min(k + 2, n)
    while pending.size:
        unresolved = []
        for rows in _blocks(pending, width):
            cand = search.kneighbors(X[rows], n_neighbors=width, return_distance=False)
            dist = _direct_distances(X, rows, cand)
            # self goes last so it is never among the first k
            is_self = cand == rows[:, None]
            order = np.lexsort((cand, dist, is_self), axis=-1)
            cand = np.take_along_axis(cand, order, axis=1)
            dist = np.take_along_axis(dist, order, axis=1)
            farthest = np.where(is_self.any(axis=1), dist[:, width - 2], dist[:, width - 1])
            done = _closed(dist[:, k - 1], farthest) if width < n else np.ones(rows.size, dtype=bool)
            indices[rows[done]] = cand[done, :k]
            distances[rows[done]] = dist[done, :k]
            unresolved.append(rows[~done])
        pending = np.concatenate(unresolved)
        width = min(2 * width, n)
    return indices, distances


def _blocks(rows: np.ndarray, width: int):
    step = max(1, _BLOCK // max(width, 1))
    for start in range(0, rows.size, step):
        yield rows[start:start + step]


class WideningSearch:
    """Nearest accepted neighbour per row, widening a ball-tree query until it is exact.

    `accept(rows, cand)` returns a boolean matrix marking which candidates
    qualify for each row. A row is settled once its nearest qualifying
    candidate lies clearly inside the farthest candidate returned; rows still
    open at `limit` candidates are reported back for an exhaustive scan.
    """

    def __init__(self, X: np.ndarray, limit: int = WIDEN_LIMIT):
        self.X = X
        self.n = X.shape[0]
        self.limit = min(limit, self.n)
        self._search = NearestNeighbors(algorithm='ball_tree').fit(X)

    def nearest(self, rows: np.ndarray, accept: Callable[[np.ndarray, np.ndarray], np.ndarray],
                start: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(index, distance, settled) per row; index is -1 where nothing qualifies."""
        rows = np.asarray(rows, dtype=np.int64)
        found = np.full(rows.size, -1, dtype=np.int64)
        found_d = np.full(rows.size, np.inf)
        settled = np.zeros(rows.size, dtype=bool)
        pending = np.arange(rows.size)
        width = min(max(start, 1), self.limit)
        while pending.size:
            for block in _blocks(pending, width):
                who = rows[block]
                cand = self._search.kneighbors(self.X[who], n_neighbors=width, return_distance=False)
                dist = _direct_distances(self.X, who, cand)
                masked = np.where(accept(who, cand), dist, np.inf)
                best = np.lexsort((cand, masked), axis=-1)[:, 0]
                pick = np.arange(block.size)
                best_d = masked[pick, best]
                if width == self.n:
                    done = np.ones(block.size, dtype=bool)
                else:
                    done = np.isfinite(best_d) & _closed(best_d, dist.max(axis=1))
                hit = done & np.isfinite(best_d)
                found[block[hit]] = cand[pick[hit], best[hit]]
                found_d[block[hit]] = best_d[hit]
                settled[block[done]] = True
            pending = pending[~settled[pending]]
            if width >= self.limit:
                break
            width = min(2 * width, self.limit)
        return found, found_d, settled

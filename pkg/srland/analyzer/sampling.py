"""
Active query strategies: cluster cores, mode boundaries, or uniform random.
"""
import logging
import os
import warnings
from typing import Iterable, List, Tuple

import numpy as np
import pandas as pd

from srland.exceptions import CoverageWarning, ParameterError
from srland.models.types import GroundTruth, LabeledSet, ModeSet

logger = logging.getLogger(__name__)

_CHUNK = 4096


class Oracle:
    """Answers label queries from ground truth and keeps an ordered query log.

    Pixels with ground-truth label 0 are not answerable.
    """

    def __init__(self, gt: GroundTruth):
        self.gt = gt
        self.log: List[Tuple[int, int]] = []

    @property
    def classes(self) -> np.ndarray:
        return self.gt.classes

    def answerable(self, i: int) -> bool:
        return bool(self.gt.labels[i] > 0)

    def answerable_indices(self) -> np.ndarray:
        return np.flatnonzero(self.gt.labels > 0)

    def query(self, i: int) -> int:
        if not self.answerable(i):
            raise ParameterError(f"pixel {i} has no ground truth and cannot be queried")
        label = int(self.gt.labels[i])
        self.log.append((int(i), label))
        return label

    def log_frame(self) -> pd.DataFrame:
        idx = np.array([i for i, _ in self.log], dtype=np.int64)
        rows, cols = np.divmod(idx, self.gt.width)
        return pd.DataFrame({
            'index': idx,
            'row': rows,
            'col': cols,
            'label': np.array([y for _, y in self.log], dtype=np.int64),
            'order': np.arange(len(self.log), dtype=np.int64),
        })

    def export_log(self, path: os.PathLike) -> None:
        self.log_frame().to_csv(path, index=False)


def _query_in_order(candidates: Iterable[int], L: int, oracle: Oracle, what: str) -> Tuple[LabeledSet, int]:
    """Query the first L answerable candidates; returns the set and the stopping position."""
    if L < 1:
        raise ParameterError(f"query budget must be at least 1, got {L}")
    chosen = LabeledSet(budget=L)
    skipped = 0
    position = 0
    for position, i in enumerate(candidates, start=1):
        if len(chosen) == L:
            position -= 1
            break
        if not oracle.answerable(i):
            skipped += 1
            continue
        chosen.add(i, oracle.query(i))
    if len(chosen) < L:
        raise ParameterError(f"only {len(chosen)} answerable {what} available for a budget of {L}")
    if skipped:
        logger.warning("skipped %d %s without ground truth", skipped, what)
    return chosen, position


def sample_core(modeset: ModeSet, L: int, oracle: Oracle, ensure_coverage: bool = False) -> LabeledSet:
    """Query the top-L answerable modes, optionally extending until every class is labeled."""
    ranking = [int(i) for i in modeset.indices]
    chosen, position = _query_in_order(ranking, L, oracle, 'modes')
    if ensure_coverage:
        missing = set(oracle.classes.tolist()) - set(chosen.labels)
        rest = iter(ranking[position:])
        while missing:
            nxt = next(rest, None)
            if nxt is None:
                break
            if not oracle.answerable(nxt):
                continue
            label = oracle.query(nxt)
            chosen.add(nxt, label)
            missing.discard(label)
        if missing:
            msg = (f"mode ranking exhausted with classes {sorted(missing)} unlabeled "
                   f"after {chosen.used} queries")
            chosen.coverage_warning = msg
            logger.warning(msg)
            warnings.warn(msg, CoverageWarning, stacklevel=2)
        elif chosen.used > L:
            logger.info("coverage augmentation extended the budget from %d to %d", L, chosen.used)
    return chosen


def boundary_scores(E: np.ndarray, modeset: ModeSet) -> np.ndarray:
    """|D_t to nearest mode - D_t to second-nearest mode| for every point."""
    modes = np.asarray(modeset.indices)
    if modes.size < 2:
        raise ParameterError(f"boundary scores need at least 2 modes, got {modes.size}")
    centers = E[modes]
    n = E.shape[0]
    out = np.empty(n)
    for start in range(0, n, _CHUNK):
        block = E[start:start + _CHUNK]
        diff = block[:, None, :] - centers[None, :, :]
        dist = np.sqrt(np.einsum('ijk,ijk->ij', diff, diff))
        two = np.partition(dist, 1, axis=1)[:, :2]
        out[start:start + _CHUNK] = np.abs(two[:, 1] - two[:, 0])
    return out


def sample_boundary(E: np.ndarray, modeset: ModeSet, L: int, oracle: Oracle) -> LabeledSet:
    """Query the L answerable points most ambiguous between their two nearest modes."""
    scores = boundary_scores(E, modeset)
    order = np.lexsort((np.arange(scores.shape[0]), scores))
    chosen, _ = _query_in_order((int(i) for i in order), L, oracle, 'boundary points')
    return chosen


def sample_random(n: int, L: int, oracle: Oracle, seed: int = 0) -> LabeledSet:
    """Uniform sample without replacement from the answerable pixels."""
    if L < 1:
        raise ParameterError(f"query budget must be at least 1, got {L}")
    if n != oracle.gt.labels.shape[0]:
        raise ParameterError(f"oracle covers {oracle.gt.labels.shape[0]} points, not {n}")
    pool = oracle.answerable_indices()
    if L > pool.size:
        raise ParameterError(f"only {pool.size} answerable pixels for a budget of {L}")
    rng = np.random.default_rng(seed)
    chosen = LabeledSet(budget=L)
    for i in rng.choice(pool, size=L, replace=False):
        chosen.add(int(i), oracle.query(int(i)))
    return chosen

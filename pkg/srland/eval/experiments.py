"""
Experiment drivers: learning curves, spatial-radius sweeps and the scaling benchmark.

Each returns a pandas DataFrame whose columns are the CSV headers written by the CLI.
"""
import logging
import math
import time
from typing import Iterable, Optional

import numpy as np
import pandas as pd

from srland.config import trial_seeds
from srland.datasets.synthetic import synthesize_scene
from srland.eval.pipeline import LandPipeline
from srland.exceptions import ParameterError
from srland.models.schemas import RunConfig
from srland.models.types import GroundTruth, ImageCube

logger = logging.getLogger(__name__)

CURVE_COLUMNS = ['budget', 'trials', 'mean_oa', 'std_oa', 'mean_aa', 'mean_kappa', 'mean_budget_used']
SWEEP_COLUMNS = ['radius', 'budget', 'trials', 'mean_oa', 'std_oa', 'mean_aa', 'mean_kappa']
BENCH_COLUMNS = ['n', 'height', 'width', 'seconds', 'overall_accuracy']


def effective_trials(config: RunConfig, trials: int) -> int:
    """Deterministic samplers need one run; only the random sampler is repeated."""
    if trials < 1:
        raise ParameterError(f"trials must be at least 1, got {trials}")
    return trials if config.is_random else 1


def _summary(records) -> dict:
    oa = np.array([r.overall_accuracy for r in records])
    return {
        'trials': len(records),
        'mean_oa': float(oa.mean()),
        'std_oa': float(oa.std()),
        'mean_aa': float(np.mean([r.average_accuracy for r in records])),
        'mean_kappa': float(np.mean([r.kappa for r in records])),
    }


def learning_curve(cube: ImageCube, gt: GroundTruth, config: RunConfig, budgets: Iterable[int],
                   trials: int = 1, seed: Optional[int] = None) -> pd.DataFrame:
    """Mean accuracy per query budget; curves need not be monotone in the budget."""
    budgets = sorted({int(b) for b in budgets})
    if not budgets or budgets[0] < 1:
        raise ParameterError("budgets must be a nonempty list of positive integers")
    if seed is not None:
        config = config.model_copy(update={'seed': seed})
    trials = effective_trials(config, trials)
    pipeline = LandPipeline(config)
    per_budget = {b: [] for b in budgets}
    for trial in range(trials):
        noise_seed, _ = trial_seeds(config.seed, trial)
        geometry = pipeline.build_geometry(cube, noise_seed)
        for b in budgets:
            per_budget[b].append(pipeline.run(cube, gt, trial, budget=b, geometry=geometry).record)
    rows = []
    for b in budgets:
        row = {'budget': b, **_summary(per_budget[b])}
        row['mean_budget_used'] = float(np.mean([r.budget_used for r in per_budget[b]]))
        rows.append(row)
        logger.info("budget %d: mean OA %.4f over %d trials", b, row['mean_oa'], row['trials'])
    return pd.DataFrame(rows, columns=CURVE_COLUMNS)


def radius_sweep(cube: ImageCube, gt: GroundTruth, config: RunConfig, radii: Iterable[float],
                 budget: Optional[int] = None, trials: int = 1,
                 seed: Optional[int] = None) -> pd.DataFrame:
    """Accuracy of the spatially regularized variant as a function of the radius."""
    radii = sorted({float(r) for r in radii})
    if not radii:
        raise ParameterError("radii must be a nonempty list")
    update = {'graph': 'spatial'}
    if seed is not None:
        update['seed'] = seed
    if budget is not None:
        update['budget'] = budget
    base = config.model_copy(update=update)
    trials = effective_trials(base, trials)
    rows = []
    for r in radii:
        cfg = RunConfig.validate_dict({**base.model_dump(), 'radius': r})
        pipeline = LandPipeline(cfg)
        records = [pipeline.run(cube, gt, trial).record for trial in range(trials)]
        rows.append({'radius': r, 'budget': cfg.budget, **_summary(records)})
        logger.info("radius %s: mean OA %.4f", r, rows[-1]['mean_oa'])
    return pd.DataFrame(rows, columns=SWEEP_COLUMNS)


def scaling_benchmark(sizes: Iterable[int], config: RunConfig, bands: int = 8, classes: int = 4,
                      separation: float = 10.0, smoothness: int = 2) -> pd.DataFrame:
    """Wall time of the full pipeline on square synthetic scenes of increasing size.

    The spatial radius and m stay fixed while the KDE neighbour count grows
    like log2(n).
    """
    rows = []
    for n in sorted(int(s) for s in sizes):
        side = int(round(math.sqrt(n)))
        if side * side != n or side < 2:
            raise ParameterError(f"benchmark sizes must be perfect squares >= 4, got {n}")
        cube, gt = synthesize_scene(side, side, bands, classes, separation, smoothness, seed=config.seed)
        cfg = config.model_copy(update={'kde_k': max(1, math.ceil(math.log2(n)))})
        start = time.perf_counter()
        record = LandPipeline(cfg).run(cube, gt).record
        seconds = time.perf_counter() - start
        rows.append({'n': n, 'height': side, 'width': side, 'seconds': seconds,
                     'overall_accuracy': record.overall_accuracy})
        logger.info("n=%d finished in %.2fs", n, seconds)
    return pd.DataFrame(rows, columns=BENCH_COLUMNS)


def loglog_slope(table: pd.DataFrame) -> float:
    """Least-squares slope of log(seconds) against log(n)."""
    if len(table) < 2:
        raise ParameterError("a slope needs at least two benchmark sizes")
    slope, _ = np.polyfit(np.log(table['n'].to_numpy(float)), np.log(table['seconds'].to_numpy(float)), 1)
    return float(slope)

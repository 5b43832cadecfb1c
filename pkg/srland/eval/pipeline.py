"""
End-to-end active learning run: graph, eigenpairs, density, modes, queries, labels, metrics.
"""
import logging
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

import numpy as np

from srland.analyzer import density, graph, labeling, modes, sampling, spectral
from srland.config import trial_seeds
from srland.eval.metrics import evaluate
from srland.exceptions import SRLandError
from srland.models.schemas import RunConfig, RunRecord
from srland.models.types import (DensityProfile, DiffusionModel, GroundTruth, ImageCube,
                                 LabeledSet, LabelMap, MarkovChain, ModeSet, SparseAffinity)
from srland.utils.data_processor import inject_noise

logger = logging.getLogger(__name__)

DEFAULT_RESERVE_CLASSES = 10


@dataclass
class Geometry:
    """Everything computed before any label is queried; reusable across budgets."""
    cube: ImageCube
    affinity: SparseAffinity
    chain: MarkovChain
    model: DiffusionModel
    embedding: np.ndarray
    density: DensityProfile
    rho: np.ndarray
    fallback_count: int
    neighbors: Tuple[np.ndarray, np.ndarray]  # D_t neighbour table shared by rho and labeling
    timings: Dict[str, float] = field(default_factory=dict)


@dataclass
class PipelineResult:
    record: RunRecord
    label_map: LabelMap
    seeds: LabeledSet
    oracle: sampling.Oracle
    geometry: Geometry
    modeset: ModeSet
    timings: Dict[str, float]


class LandPipeline:
    def __init__(self, config: RunConfig):
        self.config = config

    @contextmanager
    def _stage(self, name: str, timings: Dict[str, float]):
        start = time.perf_counter()
        try:
            yield
        except SRLandError as e:
            raise e.with_stage(name)
        finally:
            timings[name] = timings.get(name, 0.0) + time.perf_counter() - start

    def build_geometry(self, cube: ImageCube, noise_seed: int = 0) -> Geometry:
        cfg = self.config
        timings: Dict[str, float] = {}
        with self._stage('preprocess', timings):
            cube = inject_noise(cube, cfg.noise_variance, noise_seed)
        with self._stage('graph', timings):
            if cfg.graph == 'spatial':
                affinity = graph.build_spatial_affinity(cube, cfg.radius, cfg.sigma)
            else:
                affinity = graph.build_spectral_affinity(cube, cfg.k_graph, cfg.sigma)
            chain = graph.to_markov(affinity)
        with self._stage('spectral', timings):
            m = min(cfg.m or spectral.default_m(cube.n), cube.n)
            model = spectral.top_eigenpairs(chain, m)
            embedding = spectral.embed(model, cfg.t)
        with self._stage('density', timings):
            profile = density.estimate_density(cube, cfg.kde_k)
        with self._stage('modes', timings):
            neighbors = spectral.dt_neighbor_table(embedding, modes.default_scan_count(cube.n))
            rho = modes.compute_rho(embedding, profile, neighbors=neighbors)
        return Geometry(cube, affinity, chain, model, embedding, profile,
                        rho.rho, rho.fallback_count, neighbors, timings)

    def _mode_count(self, geometry: Geometry, oracle: sampling.Oracle, budget: int) -> ModeSet:
        """Rank enough modes that `budget` plus a class reserve of them are answerable."""
        n = geometry.cube.n
        classes = oracle.classes.size or DEFAULT_RESERVE_CLASSES
        wanted = budget + 2 * classes
        M = min(n, self.config.modes or wanted)
        while True:
            modeset = modes.detect_modes(geometry.density, geometry.rho, M, geometry.fallback_count)
            answerable = int(sum(oracle.answerable(int(i)) for i in modeset.indices))
            if self.config.modes or answerable >= min(wanted, oracle.answerable_indices().size) or M == n:
                return modeset
            M = min(n, 2 * M)

    def query(self, geometry: Geometry, oracle: sampling.Oracle, budget: int,
              sampler_seed: int = 0) -> Tuple[LabeledSet, ModeSet]:
        cfg = self.config
        modeset = self._mode_count(geometry, oracle, budget)
        if cfg.sampler == 'core':
            seeds = sampling.sample_core(modeset, budget, oracle, cfg.ensure_coverage)
        elif cfg.sampler == 'boundary':
            seeds = sampling.sample_boundary(geometry.embedding, modeset, budget, oracle)
        else:
            seeds = sampling.sample_random(geometry.cube.n, budget, oracle, sampler_seed)
        logger.info("queried %d labels (budget %d) with the %s sampler", seeds.used, budget, cfg.sampler)
        return seeds, modeset

    def propagate(self, geometry: Geometry, seeds: LabeledSet) -> LabelMap:
        cfg = self.config
        labeler = labeling.TwoStageLabeler(geometry.cube.shape, cfg.radius, cfg.consensus_threshold,
                                           cfg.consensus_enabled)
        return labeler.label(seeds, geometry.density, geometry.embedding, geometry.neighbors)

    def run(self, cube: ImageCube, gt: GroundTruth, trial: int = 0,
            budget: Optional[int] = None, geometry: Optional[Geometry] = None) -> PipelineResult:
        cfg = self.config
        budget = budget or cfg.budget
        gt.check_matches(cube)
        start = time.perf_counter()
        noise_seed, sampler_seed = trial_seeds(cfg.seed, trial)
        reused = geometry is not None
        if geometry is None:
            geometry = self.build_geometry(cube, noise_seed)
        timings = dict(geometry.timings)
        oracle = sampling.Oracle(gt)
        with self._stage('sampling', timings):
            seeds, modeset = self.query(geometry, oracle, budget, sampler_seed)
        with self._stage('labeling', timings):
            label_map = self.propagate(geometry, seeds)
        with self._stage('metrics', timings):
            scores = evaluate(label_map.labels, gt.labels)
        elapsed = time.perf_counter() - start
        if reused:
            elapsed += sum(geometry.timings.values())
        record = RunRecord(
            dataset=cfg.dataset or 'unnamed',
            variant=cfg.variant,
            radius=cfg.radius,
            k_graph=geometry.affinity.k_graph,
            t=cfg.t,
            m=geometry.model.m,
            k=geometry.density.k,
            budget=budget,
            budget_used=seeds.used,
            seed=cfg.seed,
            seconds=elapsed,
            bands=cube.bands,
            modes=len(modeset),
            fallback_count=geometry.fallback_count,
            deferred=label_map.deferred,
            provenance=label_map.counts(),
            coverage_warning=seeds.coverage_warning,
            **scores,
        )
        logger.info("%s OA=%.4f AA=%.4f kappa=%.4f in %.2fs", record.variant,
                    record.overall_accuracy, record.average_accuracy, record.kappa, elapsed)
        return PipelineResult(record, label_map, seeds, oracle, geometry, modeset, timings)


def run_pipeline(cube: ImageCube, gt: GroundTruth, config: RunConfig,
                 trial: int = 0) -> Tuple[RunRecord, LabelMap]:
    result = LandPipeline(config).run(cube, gt, trial)
    return result.record, result.label_map

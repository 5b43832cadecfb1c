"""
Synthetic labeled scenes for desk-scale experiments and tests.
"""
import logging
from typing import Tuple

import numpy as np
from scipy.spatial.distance import pdist

from srland.exceptions import ParameterError
from srland.models.types import GroundTruth, ImageCube

logger = logging.getLogger(__name__)


class SceneSynthesizer:
    """Piecewise-constant spectral scenes with spatially contiguous classes.

    Each class owns `smoothness` seed pixels; every pixel takes the class of
    its nearest seed (Euclidean grid distance, ties to the earlier seed), and
    its spectrum is that class's mean plus Gaussian noise of std `noise_scale`.
    """

    def __init__(self, height: int, width: int, bands: int, classes: int,
                 separation: float, smoothness: int = 1, noise_scale: float = 1.0, seed: int = 0):
        if classes < 2:
            raise ParameterError(f"classes must be at least 2, got {classes}")
        if separation <= 0:
            raise ParameterError(f"separation must be positive, got {separation}")
        if height < 1 or width < 1 or bands < 1:
            raise ParameterError("height, width and bands must be positive")
        if smoothness < 1:
            raise ParameterError(f"smoothness must be at least 1, got {smoothness}")
        if classes > height * width:
            raise ParameterError(f"{classes} classes do not fit in {height * width} pixels")
        if classes * smoothness > height * width:
            raise ParameterError(
                f"{classes * smoothness} region seeds do not fit in {height * width} pixels")
        if noise_scale < 0:
            raise ParameterError(f"noise_scale must be nonnegative, got {noise_scale}")
        self.height = height
        self.width = width
        self.bands = bands
        self.classes = classes
        self.separation = float(separation)
        self.smoothness = smoothness
        self.noise_scale = float(noise_scale)
        self.seed = seed

    def generate(self) -> Tuple[ImageCube, GroundTruth]:
        rng = np.random.default_rng(self.seed)
        labels = self._partition(rng)
        means = self._class_means(rng)
        n = self.height * self.width
        points = means[labels - 1] + self.noise_scale * rng.standard_normal((n, self.bands))
        logger.debug("synthesized %dx%d scene, %d classes, %d bands",
                     self.height, self.width, self.classes, self.bands)
        return ImageCube(self.height, self.width, points), GroundTruth(self.height, self.width, labels)

    def _partition(self, rng: np.random.Generator) -> np.ndarray:
        n = self.height * self.width
        seeds = rng.choice(n, size=self.classes * self.smoothness, replace=False)
        # seed s belongs to class (s mod classes) + 1 so every class gets `smoothness` seeds
        owner = np.arange(seeds.size) % self.classes + 1
        rows, cols = np.divmod(np.arange(n), self.width)
        srows, scols = np.divmod(seeds, self.width)
        d2 = (rows[:, None] - srows[None, :]) ** 2 + (cols[:, None] - scols[None, :]) ** 2
        return owner[np.argmin(d2, axis=1)].astype(np.int64)

    def _class_means(self, rng: np.random.Generator) -> np.ndarray:
        if self.bands == 1:
            return (np.arange(self.classes, dtype=float) * self.separation)[:, None]
        means = rng.standard_normal((self.classes, self.bands))
        closest = pdist(means).min()
        return means * (self.separation / closest)


def synthesize_scene(n1: int, n2: int, bands: int, classes: int, separation: float,
                     smoothness: int = 1, seed: int = 0,
                     noise_scale: float = 1.0) -> Tuple[ImageCube, GroundTruth]:
    return SceneSynthesizer(n1, n2, bands, classes, separation, smoothness, noise_scale, seed).generate()

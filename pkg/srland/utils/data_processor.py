import numpy as np

from srland.exceptions import ParameterError
from srland.models.types import ImageCube

DEFAULT_NOISE_VARIANCE = 1e-4


def inject_noise(cube: ImageCube, variance: float = DEFAULT_NOISE_VARIANCE, seed: int = 0) -> ImageCube:
    """Add i.i.d. N(0, variance) noise so pixels with identical spectra become distinct."""
    if variance < 0:
        raise ParameterError(f"noise variance must be nonnegative, got {variance}")
    if variance == 0:
        return cube
    rng = np.random.default_rng(seed)
    noisy = cube.points + rng.normal(0.0, np.sqrt(variance), size=cube.points.shape)
    return ImageCube(cube.height, cube.width, noisy)

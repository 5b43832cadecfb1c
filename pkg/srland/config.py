"""
Environment settings, dataset presets and seed splitting.
"""
import os
from typing import Dict, Tuple

import numpy as np
from dotenv import load_dotenv

load_dotenv()

OUTPUT_DIR = os.getenv('SRLAND_OUTPUT_DIR', './runs')
LOG_LEVEL = os.getenv('SRLAND_LOG_LEVEL', 'INFO')
DATA_DIR = os.getenv('SRLAND_DATA_DIR', './data')

# Spatial radius per public scene; every preset uses k = 100 and noise variance 1e-4.
PRESETS: Dict[str, Dict] = {
    'salinas_a': {'dataset': 'salinas_a', 'radius': 11, 'kde_k': 100, 'noise_variance': 1e-4},
    'indian_pines': {'dataset': 'indian_pines', 'radius': 14, 'kde_k': 100, 'noise_variance': 1e-4},
    'synthetic': {'dataset': 'synthetic', 'radius': 3, 'kde_k': 100, 'noise_variance': 1e-4},
}


def preset(name: str) -> Dict:
    key = name.lower().replace('-', '_').replace(' ', '_')
    return dict(PRESETS.get(key, {'dataset': name}))


def _draw(seq: np.random.SeedSequence) -> int:
    return int(seq.generate_state(1)[0])


def trial_seeds(root_seed: int, trial: int = 0) -> Tuple[int, int]:
    """(noise_seed, sampler_seed) for one trial.

    SeedSequence([root, trial]) spawns two children, noise first, sampler
    second; each yields one 32-bit seed.
    """
    noise, sampler = np.random.SeedSequence([root_seed, trial]).spawn(2)
    return _draw(noise), _draw(sampler)

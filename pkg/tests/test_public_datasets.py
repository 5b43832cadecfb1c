"""Reproduction on the public scenes; runs only when the NPY files are under SRLAND_DATA_DIR."""
import os

import pytest

from srland.config import DATA_DIR, preset
from srland.datasets.npy import load_npy_cube, load_npy_labels
from srland.eval.pipeline import run_pipeline
from srland.models.schemas import RunConfig


def _scene(name):
    cube_path = os.path.join(DATA_DIR, f'{name}.npy')
    gt_path = os.path.join(DATA_DIR, f'{name}_gt.npy')
    if not (os.path.exists(cube_path) and os.path.exists(gt_path)):
        pytest.skip(f'{name} files not found in {DATA_DIR}')
    return load_npy_cube(cube_path), load_npy_labels(gt_path)


@pytest.mark.slow
@pytest.mark.parametrize('budget,floor', [(10, 0.90), (20, 0.93)])
def test_salinas_a_core(budget, floor):
    cube, gt = _scene('salinas_a')
    config = RunConfig.validate_dict({**preset('salinas_a'), 'budget': budget})
    record, _ = run_pipeline(cube, gt, config)
    assert record.overall_accuracy >= floor


@pytest.mark.slow
@pytest.mark.parametrize('budget,floor', [(50, 0.78), (100, 0.81)])
def test_indian_pines_core(budget, floor):
    cube, gt = _scene('indian_pines')
    config = RunConfig.validate_dict({**preset('indian_pines'), 'budget': budget})
    record, _ = run_pipeline(cube, gt, config)
    assert record.overall_accuracy >= floor

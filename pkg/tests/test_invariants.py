import numpy as np
import pytest
import scipy.sparse

from srland.datasets.synthetic import synthesize_scene
from srland.eval.pipeline import LandPipeline
from srland.models.schemas import Manifest, RunConfig


def _random_scene(seed):
    rng = np.random.default_rng(seed)
    height, width = (int(v) for v in rng.integers(4, 9, size=2))
    return synthesize_scene(height, width, int(rng.integers(2, 6)), int(rng.integers(2, 4)), 3.0,
                            seed=seed)


@pytest.mark.parametrize('seed', range(100))
def test_run_invariants_on_random_scenes(seed, tmp_path):
    cube, gt = _random_scene(seed)
    config = RunConfig(radius=1.5, budget=3, kde_k=10, seed=seed)
    result = LandPipeline(config).run(cube, gt)
    geometry = result.geometry

    P = geometry.chain.transitions
    assert np.abs(np.asarray(P.sum(axis=1)).ravel() - 1.0).max() <= 1e-12
    flux = scipy.sparse.diags(geometry.chain.stationary) @ P
    assert abs(flux - flux.T).max() <= 1e-12
    assert abs(geometry.density.p.sum() - 1.0) <= 1e-12
    assert geometry.rho[np.argmax(geometry.density.p)] == 1.0

    labels = result.label_map.labels
    assert np.all(labels > 0)
    assert all(tag for tag in result.label_map.provenance)
    for i, y in result.seeds:
        assert labels[i] == y == gt.labels[i]

    path = tmp_path / 'manifest.json'
    path.write_text(Manifest(config=config, record=result.record).model_dump_json())
    replay = LandPipeline(RunConfig.from_file(path)).run(cube, gt)
    np.testing.assert_array_equal(replay.label_map.labels, labels)
    assert replay.record.overall_accuracy == result.record.overall_accuracy

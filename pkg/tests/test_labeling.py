import numpy as np
import pytest

from srland.analyzer.labeling import (SEED, STAGE1, STAGE2_CONSENSUS, STAGE2_GLOBAL, STAGE2_NN,
                                      TwoStageLabeler, consensus_label, two_stage_label)
from srland.exceptions import ParameterError
from srland.models.types import LabeledSet


def _seeds(pairs):
    seeds = LabeledSet(budget=len(pairs))
    for i, y in pairs:
        seeds.add(i, y)
    return seeds


def test_consensus_needs_a_strict_majority():
    labels = np.array([1, 1, 1, 1, 0, 2, 2, 2, 0])
    # r = 1 sees pixels 1, 3, 5, 7: a 2-2 tie
    assert consensus_label(labels, (3, 3), 4, 1) is None
    # r = 1.5 sees all eight: four 1s out of seven labeled
    assert consensus_label(labels, (3, 3), 4, 1.5) == 1
    assert consensus_label(labels, (3, 3), 4, 1.5, threshold=0.6) is None
    assert consensus_label(np.zeros(9, dtype=np.int64), (3, 3), 4, 1.5) is None


def test_labels_follow_nearest_denser_labeled_point():
    E = np.array([[0.0], [1.0], [2.0], [10.0], [11.0], [12.0]])
    p = np.array([0.3, 0.2, 0.1, 0.25, 0.15, 0.05])
    result = two_stage_label(_seeds([(0, 1), (3, 2)]), p, E, (1, 6), 1, use_consensus=False)
    np.testing.assert_array_equal(result.labels, [1, 1, 1, 2, 2, 2])
    assert result.provenance.tolist() == [SEED, STAGE1, STAGE1, SEED, STAGE1, STAGE1]
    assert result.deferred == 0
    np.testing.assert_array_equal(result.as_grid(), result.labels.reshape(1, 6))


def test_consensus_conflict_defers_to_stage_two():
    E = np.array([[0.0], [10.0], [0.5], [10.5]])
    p = np.array([0.4, 0.1, 0.3, 0.2])
    seeds = _seeds([(0, 2), (2, 2), (3, 1)])
    regular = two_stage_label(seeds, p, E, (1, 4), 1, use_consensus=True)
    assert regular.labels[1] == 2
    assert regular.provenance[1] == STAGE2_CONSENSUS
    assert regular.deferred == 1
    plain = two_stage_label(seeds, p, E, (1, 4), 1, use_consensus=False)
    assert plain.labels[1] == 1
    assert plain.provenance[1] == STAGE1


def test_points_denser_than_every_seed_use_global_then_denser_fallbacks():
    E = np.array([[0.0], [1.0], [3.0]])
    p = np.array([0.5, 0.3, 0.2])
    result = two_stage_label(_seeds([(2, 7)]), p, E, (1, 3), 1, use_consensus=False)
    np.testing.assert_array_equal(result.labels, [7, 7, 7])
    assert result.provenance.tolist() == [STAGE2_GLOBAL, STAGE2_NN, SEED]
    assert result.deferred == 2
    assert result.counts() == {SEED: 1, STAGE2_GLOBAL: 1, STAGE2_NN: 1}


def test_every_pixel_gets_a_seed_label(random_cube):
    rng = np.random.default_rng(0)
    E = random_cube.points
    p = rng.random(random_cube.n)
    seeds = _seeds([(0, 1), (20, 2), (35, 3)])
    result = TwoStageLabeler(random_cube.shape, 1.5).label(seeds, p, E)
    assert set(result.labels.tolist()) <= {1, 2, 3}
    assert result.labels[[0, 20, 35]].tolist() == [1, 2, 3]
    again = TwoStageLabeler(random_cube.shape, 1.5).label(seeds, p, E)
    np.testing.assert_array_equal(result.labels, again.labels)


def test_labeler_arguments_are_checked():
    E = np.zeros((4, 1))
    with pytest.raises(ParameterError):
        TwoStageLabeler((2, 2), 1, threshold=1.0)
    with pytest.raises(ParameterError):
        TwoStageLabeler((2, 2), 0.5)
    with pytest.raises(ParameterError):
        TwoStageLabeler((2, 2), 1).label(LabeledSet(), np.ones(4), E)
    with pytest.raises(ParameterError):
        TwoStageLabeler((2, 3), 1).label(_seeds([(0, 1)]), np.ones(4), E)


@pytest.mark.parametrize('use_consensus', [True, False])
def test_short_neighbour_scans_label_like_full_tables(use_consensus):
    rng = np.random.default_rng(8)
    E = rng.standard_normal((120, 3))
    p = rng.random(120)
    seeds = _seeds([(5, 1), (40, 2), (77, 3), (101, 1)])
    full = TwoStageLabeler((10, 12), 1.5, use_consensus=use_consensus, scan_count=119).label(seeds, p, E)
    short = TwoStageLabeler((10, 12), 1.5, use_consensus=use_consensus, scan_count=1).label(seeds, p, E)
    np.testing.assert_array_equal(short.labels, full.labels)
    assert short.provenance.tolist() == full.provenance.tolist()
    assert short.deferred == full.deferred


def test_equal_density_lower_index_counts_as_denser():
    E = np.array([[0.0], [1.0], [5.0]])
    p = np.array([0.3, 0.3, 0.4])
    result = two_stage_label(_seeds([(0, 4), (2, 9)]), p, E, (1, 3), 1, use_consensus=False)
    # point 1 ties point 0 in density but ranks after it, so it copies point 0
    assert result.labels.tolist() == [4, 4, 9]
    assert result.provenance[1] == STAGE1

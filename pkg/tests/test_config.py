import argparse
import json

import pytest

from srland.cli.options import add_run_options, resolve_config
from srland.config import PRESETS, preset, trial_seeds
from srland.exceptions import DataFormatError, ParameterError
from srland.models.schemas import Manifest, RunConfig, RunRecord


def _args(*argv):
    parser = argparse.ArgumentParser()
    add_run_options(parser)
    return parser.parse_args(list(argv))


def test_trial_seeds_are_stable_and_distinct():
    assert trial_seeds(0, 0) == trial_seeds(0, 0)
    noise, sampler = trial_seeds(0, 0)
    assert noise != sampler
    assert trial_seeds(0, 1) != trial_seeds(0, 0)
    assert trial_seeds(1, 0) != trial_seeds(0, 0)


def test_presets_carry_published_radii():
    assert preset('Salinas-A')['radius'] == 11
    assert preset('indian_pines')['radius'] == 14
    assert preset('mystery') == {'dataset': 'mystery'}
    assert all(p['kde_k'] == 100 for p in PRESETS.values())


def test_flags_override_file_which_overrides_preset(tmp_path):
    path = tmp_path / 'cfg.json'
    path.write_text(json.dumps({'dataset': 'salinas_a', 'budget': 20, 'radius': 5}))
    config = resolve_config(_args('--config', str(path), '--budget', '30'))
    assert config.radius == 5
    assert config.budget == 30
    assert config.kde_k == 100
    assert resolve_config(_args('--dataset', 'indian_pines')).radius == 14
    assert resolve_config(_args()).radius == 3.0


def test_manifest_is_accepted_as_a_config(tmp_path):
    config = RunConfig(radius=7, budget=3, seed=9)
    path = tmp_path / 'manifest.json'
    path.write_text(Manifest(config=config, command='run').model_dump_json())
    assert RunConfig.from_file(path) == config


def test_invalid_configs(tmp_path):
    with pytest.raises(ParameterError):
        RunConfig.validate_dict({'radius': 3, 'colour': 'blue'})
    with pytest.raises(ParameterError):
        resolve_config(_args('--t', '-1'))
    bad = tmp_path / 'bad.json'
    bad.write_text('{not json')
    with pytest.raises(DataFormatError):
        RunConfig.from_file(bad)
    with pytest.raises(DataFormatError):
        RunConfig.from_file(tmp_path / 'absent.json')


def _record(**overrides):
    fields = dict(dataset='d', variant='sr-core', t=30, m=10, k=5, budget=4, budget_used=4, seed=0,
                  overall_accuracy=1.0, average_accuracy=1.0, kappa=1.0, seconds=0.1, bands=3,
                  modes=8)
    fields.update(overrides)
    return RunRecord(**fields)


def test_record_requires_budget_or_a_coverage_warning():
    assert _record().budget_used == 4
    with pytest.raises(ValueError):
        _record(budget_used=3)
    assert _record(budget_used=3, coverage_warning='class 2 unlabeled').budget_used == 3

import json

import numpy as np
import pytest

from srland.cli.main import main
from srland.datasets.npy import write_npy


@pytest.fixture
def scene_files(tmp_path):
    out = tmp_path / 'scene'
    assert main(['synth', '--height', '8', '--width', '8', '--bands', '3', '--classes', '2',
                 '--seed', '2', '--output-dir', str(out)]) == 0
    return out / 'cube.npy', out / 'gt.npy'


def _run(cube, gt, out, *extra):
    return main(['run', '--input', str(cube), '--gt', str(gt), '--output-dir', str(out),
                 '--budget', '4', *extra])


def test_synth_writes_cube_and_ground_truth(scene_files, capsys):
    cube, gt = scene_files
    assert cube.exists() and gt.exists()
    assert np.load(cube).shape == (8, 8, 3)


def test_eval_of_ground_truth_against_itself_is_perfect(scene_files, capsys):
    _, gt = scene_files
    capsys.readouterr()
    assert main(['eval', '--pred', str(gt), '--gt', str(gt)]) == 0
    scores = json.loads(capsys.readouterr().out)
    assert scores == {'average_accuracy': 1.0, 'kappa': 1.0, 'overall_accuracy': 1.0}


def test_run_writes_artifacts_and_is_reproducible(scene_files, tmp_path, capsys):
    cube, gt = scene_files
    assert _run(cube, gt, tmp_path / 'a') == 0
    record = json.loads(capsys.readouterr().out.strip().splitlines()[-1])
    assert record['variant'] == 'sr-core'
    assert record['budget_used'] == 4
    for name in ('labels.npy', 'labels.ppm', 'labels.csv', 'queries.csv', 'record.json',
                 'manifest.json'):
        assert (tmp_path / 'a' / name).exists()
    assert _run(cube, gt, tmp_path / 'b') == 0
    assert (tmp_path / 'a' / 'labels.npy').read_bytes() == (tmp_path / 'b' / 'labels.npy').read_bytes()
    header = (tmp_path / 'a' / 'labels.csv').read_text().splitlines()[0]
    assert header == 'row,col,label,provenance'


def test_manifest_replays_the_run(scene_files, tmp_path):
    cube, gt = scene_files
    assert _run(cube, gt, tmp_path / 'a', '--radius', '2', '--t', '10') == 0
    manifest = json.loads((tmp_path / 'a' / 'manifest.json').read_text())
    assert manifest['config']['radius'] == 2.0 and manifest['config']['t'] == 10
    assert main(['run', '--config', str(tmp_path / 'a' / 'manifest.json'),
                 '--output-dir', str(tmp_path / 'c')]) == 0
    assert (tmp_path / 'a' / 'labels.npy').read_bytes() == (tmp_path / 'c' / 'labels.npy').read_bytes()


def test_dump_arrays(scene_files, tmp_path):
    cube, gt = scene_files
    assert _run(cube, gt, tmp_path / 'd', '--dump-arrays', '--m', '6') == 0
    assert np.load(tmp_path / 'd' / 'arrays' / 'eigenvalues.npy').shape == (6,)
    assert np.load(tmp_path / 'd' / 'arrays' / 'rho.npy').shape == (64,)


def test_curve_prints_csv(scene_files, tmp_path, capsys):
    cube, gt = scene_files
    capsys.readouterr()
    assert main(['curve', '--input', str(cube), '--gt', str(gt), '--budgets', '2,4',
                 '--output-dir', str(tmp_path / 'curve')]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].startswith('budget,trials,mean_oa')
    assert len(lines) == 3
    assert (tmp_path / 'curve' / 'curve.csv').exists()


def test_usage_errors_exit_with_one(capsys):
    with pytest.raises(SystemExit) as err:
        main(['run', '--sampler', 'nope'])
    assert err.value.code == 1
    assert main(['run', '--gt', 'only.npy']) == 1


def test_malformed_budget_list_exits_with_one(scene_files, tmp_path):
    cube, gt = scene_files
    assert main(['curve', '--input', str(cube), '--gt', str(gt), '--budgets', 'x',
                 '--output-dir', str(tmp_path / 'bad')]) == 1


def test_bad_parameter_values_exit_with_one(scene_files, tmp_path):
    cube, gt = scene_files
    assert _run(cube, gt, tmp_path / 'e', '--radius', '0.5') == 1
    assert _run(cube, gt, tmp_path / 'e', '--consensus-threshold', '1.0') == 1


def test_io_errors_exit_with_two(tmp_path):
    assert main(['eval', '--pred', str(tmp_path / 'no.npy'), '--gt', str(tmp_path / 'no.npy')]) == 2
    gt = tmp_path / 'gt.npy'
    write_npy(gt, np.ones((3, 3), dtype=np.int64))
    write_npy(tmp_path / 'pred.npy', np.ones((2, 2), dtype=np.int64))
    assert main(['eval', '--pred', str(tmp_path / 'pred.npy'), '--gt', str(gt)]) == 2


def test_disconnected_graph_exits_with_four(scene_files, tmp_path):
    cube, gt = scene_files
    assert _run(cube, gt, tmp_path / 'k', '--graph', 'knn', '--kg', '1') == 4

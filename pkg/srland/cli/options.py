"""Run-configuration flags shared by the run, curve and sweep commands."""
import argparse
import json
import os
from typing import Dict, Optional

from srland.config import OUTPUT_DIR, preset
from srland.models.schemas import Manifest, RunConfig

# flag dest -> RunConfig field
_FIELDS = {
    'dataset': 'dataset',
    'input': 'input',
    'gt': 'gt',
    'output_dir': 'output_dir',
    'graph': 'graph',
    'radius': 'radius',
    'kg': 'k_graph',
    'sampler': 'sampler',
    't': 't',
    'm': 'm',
    'kde_k': 'kde_k',
    'budget': 'budget',
    'modes': 'modes',
    'ensure_coverage': 'ensure_coverage',
    'consensus_threshold': 'consensus_threshold',
    'use_consensus': 'use_consensus',
    'sigma': 'sigma',
    'noise_variance': 'noise_variance',
    'seed': 'seed',
    'trials': 'trials',
}


def add_run_options(parser: argparse.ArgumentParser) -> None:
    """All flags default to None so that only explicit flags override config files."""
    parser.add_argument('--config', help='JSON run configuration or a previous manifest.json')
    parser.add_argument('--dataset', help='preset name: salinas_a, indian_pines or synthetic')
    parser.add_argument('--input', help='image cube NPY (n1, n2, D)')
    parser.add_argument('--gt', help='ground truth NPY (n1, n2), 0 = unlabeled')
    parser.add_argument('--output-dir')
    parser.add_argument('--graph', choices=['spatial', 'knn'])
    parser.add_argument('--radius', type=float, help='spatial radius r in pixels')
    parser.add_argument('--kg', type=int, help='spectral neighbours for --graph knn')
    parser.add_argument('--sampler', choices=['core', 'boundary', 'random'])
    parser.add_argument('--t', type=int, help='diffusion time (default 30)')
    parser.add_argument('--m', type=int, help='eigenpairs kept (default min(50, n))')
    parser.add_argument('--kde-k', type=int, help='KDE nearest neighbours (default 100)')
    parser.add_argument('--budget', type=int, help='query budget L')
    parser.add_argument('--modes', type=int, help='number of ranked modes M')
    parser.add_argument('--ensure-coverage', action='store_const', const=True)
    parser.add_argument('--consensus-threshold', type=float)
    parser.add_argument('--no-consensus', dest='use_consensus', action='store_const', const=False)
    parser.add_argument('--sigma', type=float, help='graph kernel bandwidth (default: mean edge length)')
    parser.add_argument('--noise-variance', type=float,
                        help='preprocessing noise variance (default 1e-4, 0 disables)')
    parser.add_argument('--no-noise', dest='noise_variance', action='store_const', const=0.0)
    parser.add_argument('--seed', type=int)
    parser.add_argument('--trials', type=int)


def resolve_config(args: argparse.Namespace) -> RunConfig:
    """defaults < dataset preset < --config file < explicit flags."""
    data: Dict = {}
    from_file: Dict = {}
    if getattr(args, 'config', None):
        from_file = RunConfig.from_file(args.config).model_dump(exclude_unset=True)
    dataset = getattr(args, 'dataset', None) or from_file.get('dataset')
    if dataset:
        data.update(preset(dataset))
    data.update(from_file)
    for dest, name in _FIELDS.items():
        value = getattr(args, dest, None)
        if value is not None:
            data[name] = value
    return RunConfig.validate_dict(data)


def output_dir(config: RunConfig, fallback: Optional[str] = None) -> str:
    path = config.output_dir or fallback or OUTPUT_DIR
    os.makedirs(path, exist_ok=True)
    return path


def write_manifest(directory: str, manifest: Manifest) -> str:
    path = os.path.join(directory, 'manifest.json')
    with open(path, 'w', encoding='utf-8') as f:
        f.write(manifest.model_dump_json(indent=2))
        f.write('\n')
    return path


def print_json(payload: Dict) -> None:
    print(json.dumps(payload, sort_keys=True))

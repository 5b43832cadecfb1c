"""`srland run`: one active learning run with all artifacts and a replayable manifest."""
import logging
import os
import sys
import warnings

from srland.cli.options import add_run_options, output_dir, resolve_config, write_manifest
from srland.datasets.npy import load_npy_cube, load_npy_labels
from srland.eval.pipeline import LandPipeline
from srland.exceptions import CoverageWarning, ParameterError
from srland.models.schemas import Manifest, RunConfig
from srland.utils import export

logger = logging.getLogger(__name__)


def register(sub) -> None:
    p = sub.add_parser('run', help='run the pipeline once and write label maps')
    add_run_options(p)
    p.add_argument('--dump-arrays', action='store_true',
                   help='also write eigenpairs, density, rho and mode scores as NPY')
    p.set_defaults(handler=handle)


def load_inputs(config: RunConfig):
    if not config.input or not config.gt:
        raise ParameterError("both --input and --gt are required (directly or via --config)")
    cube = load_npy_cube(config.input)
    gt = load_npy_labels(config.gt)
    gt.check_matches(cube)
    return cube, gt


def handle(args) -> None:
    config = resolve_config(args)
    cube, gt = load_inputs(config)
    out = output_dir(config)
    config = config.model_copy(update={'output_dir': out})
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter('always', CoverageWarning)
        result = LandPipeline(config).run(cube, gt)
    for w in caught:
        if issubclass(w.category, CoverageWarning):
            print(f"warning: {w.message}", file=sys.stderr)

    outputs = {
        'labels_npy': os.path.join(out, 'labels.npy'),
        'labels_ppm': os.path.join(out, 'labels.ppm'),
        'labels_csv': os.path.join(out, 'labels.csv'),
        'queries_csv': os.path.join(out, 'queries.csv'),
        'record_json': os.path.join(out, 'record.json'),
    }
    export.write_label_npy(outputs['labels_npy'], result.label_map)
    export.write_label_ppm(outputs['labels_ppm'], result.label_map)
    export.write_label_csv(outputs['labels_csv'], result.label_map)
    result.oracle.export_log(outputs['queries_csv'])
    with open(outputs['record_json'], 'w', encoding='utf-8') as f:
        f.write(result.record.model_dump_json())
        f.write('\n')
    if args.dump_arrays:
        geo = result.geometry
        dumped = export.dump_arrays(os.path.join(out, 'arrays'), {
            'eigenvalues': geo.model.eigenvalues,
            'eigenvectors': geo.model.eigenvectors,
            'density': geo.density.p,
            'rho': geo.rho,
            'scores': result.modeset.scores,
            'modes': result.modeset.indices,
        })
        outputs.update({f"array_{k}": v for k, v in dumped.items()})

    manifest = Manifest(config=config, command='run', record=result.record,
                        timings=result.timings, outputs=outputs)
    write_manifest(out, manifest)
    print(result.record.model_dump_json())
    logger.info("outputs written to %s", out)

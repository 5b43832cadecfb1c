"""`srland synth`: write a synthetic cube and its ground truth."""
import logging
import os

from srland.cli.options import print_json
from srland.config import OUTPUT_DIR
from srland.datasets.npy import write_cube, write_labels
from srland.datasets.synthetic import synthesize_scene

logger = logging.getLogger(__name__)


def register(sub) -> None:
    p = sub.add_parser('synth', help='generate a synthetic labeled scene')
    p.add_argument('--height', type=int, default=32)
    p.add_argument('--width', type=int, default=32)
    p.add_argument('--bands', type=int, default=10)
    p.add_argument('--classes', type=int, default=3)
    p.add_argument('--separation', type=float, default=10.0)
    p.add_argument('--smoothness', type=int, default=1)
    p.add_argument('--noise-scale', type=float, default=1.0)
    p.add_argument('--seed', type=int, default=0)
    p.add_argument('--output-dir', default=OUTPUT_DIR)
    p.set_defaults(handler=handle)


def handle(args) -> None:
    cube, gt = synthesize_scene(args.height, args.width, args.bands, args.classes, args.separation,
                                args.smoothness, seed=args.seed, noise_scale=args.noise_scale)
    os.makedirs(args.output_dir, exist_ok=True)
    cube_path = os.path.join(args.output_dir, 'cube.npy')
    gt_path = os.path.join(args.output_dir, 'gt.npy')
    write_cube(cube_path, cube)
    write_labels(gt_path, gt)
    logger.info("wrote %s and %s", cube_path, gt_path)
    print_json({'cube': cube_path, 'gt': gt_path, 'height': cube.height, 'width': cube.width,
                'bands': cube.bands, 'classes': int(gt.classes.size)})

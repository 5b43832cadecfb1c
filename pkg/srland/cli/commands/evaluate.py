"""`srland eval`: score a label map against ground truth."""
from srland.cli.options import print_json
from srland.datasets.npy import read_npy, load_npy_labels
from srland.eval.metrics import evaluate
from srland.exceptions import ShapeError


def register(sub) -> None:
    p = sub.add_parser('eval', help='overall/average accuracy and kappa of a label map')
    p.add_argument('--pred', required=True, help='predicted label NPY (n1, n2)')
    p.add_argument('--gt', required=True, help='ground truth NPY (n1, n2)')
    p.set_defaults(handler=handle)


def handle(args) -> None:
    gt = load_npy_labels(args.gt)
    pred = read_npy(args.pred)
    if pred.shape != (gt.height, gt.width):
        raise ShapeError(f"prediction shape {pred.shape} differs from ground truth {(gt.height, gt.width)}")
    print_json(evaluate(pred, gt.labels))

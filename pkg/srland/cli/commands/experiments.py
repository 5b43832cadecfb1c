"""`srland curve`, `srland sweep` and `srland bench`: CSV-producing experiments."""
import logging
import os
import time

from srland.cli.commands.run import load_inputs
from srland.cli.options import add_run_options, output_dir, print_json, resolve_config, write_manifest
from srland.eval import experiments
from srland.exceptions import ParameterError
from srland.models.schemas import Manifest

logger = logging.getLogger(__name__)


def _int_list(text: str):
    try:
        return [int(v) for v in text.split(',') if v.strip()]
    except ValueError as e:
        raise ParameterError(f"expected comma-separated integers, got {text!r}") from e


def _float_list(text: str):
    try:
        return [float(v) for v in text.split(',') if v.strip()]
    except ValueError as e:
        raise ParameterError(f"expected comma-separated numbers, got {text!r}") from e


def register(sub) -> None:
    curve = sub.add_parser('curve', help='accuracy as a function of the query budget')
    add_run_options(curve)
    curve.add_argument('--budgets', default='1,2,5,10,20', help='comma-separated budgets')
    curve.set_defaults(handler=handle_curve)

    sweep = sub.add_parser('sweep', help='accuracy as a function of the spatial radius')
    add_run_options(sweep)
    sweep.add_argument('--radii', default='1,2,4,8,12', help='comma-separated radii')
    sweep.set_defaults(handler=handle_sweep)

    bench = sub.add_parser('bench', help='pipeline wall time on synthetic scenes of growing size')
    add_run_options(bench)
    bench.add_argument('--sizes', default='4096,16384,65536',
                       help='comma-separated point counts (perfect squares)')
    bench.add_argument('--bands', type=int, default=8)
    bench.set_defaults(handler=handle_bench)


def _finish(command: str, config, table, out: str, started: float, parameters: dict) -> None:
    path = os.path.join(out, f"{command}.csv")
    table.to_csv(path, index=False)
    manifest = Manifest(config=config.model_copy(update={'output_dir': out}), command=command,
                        timings={'total': time.perf_counter() - started},
                        outputs={'table_csv': path}, parameters=parameters)
    write_manifest(out, manifest)
    logger.info("wrote %s", path)


def handle_curve(args) -> None:
    started = time.perf_counter()
    config = resolve_config(args)
    cube, gt = load_inputs(config)
    budgets = _int_list(args.budgets)
    table = experiments.learning_curve(cube, gt, config, budgets, trials=config.trials)
    _finish('curve', config, table, output_dir(config), started, {'budgets': budgets})
    print(table.to_csv(index=False), end='')


def handle_sweep(args) -> None:
    started = time.perf_counter()
    config = resolve_config(args)
    cube, gt = load_inputs(config)
    radii = _float_list(args.radii)
    table = experiments.radius_sweep(cube, gt, config, radii, trials=config.trials)
    _finish('sweep', config, table, output_dir(config), started, {'radii': radii})
    print(table.to_csv(index=False), end='')


def handle_bench(args) -> None:
    started = time.perf_counter()
    config = resolve_config(args)
    if args.m is None:
        config = config.model_copy(update={'m': 20})
    sizes = _int_list(args.sizes)
    table = experiments.scaling_benchmark(sizes, config, bands=args.bands)
    slope = experiments.loglog_slope(table) if len(table) > 1 else None
    _finish('bench', config, table, output_dir(config), started,
            {'sizes': sizes, 'bands': args.bands, 'loglog_slope': slope})
    print(table.to_csv(index=False), end='')
    if slope is not None:
        print_json({'loglog_slope': slope})

"""
srland command-line entry point.

Exit codes: 0 success (coverage shortfalls are reported on stderr), 1 usage or
parameter error, 2 I/O or format error, 3 numerical error, 4 connectivity error.
"""
import argparse
import logging
import sys
from typing import List, Optional

from srland import __version__
from srland.cli.commands import evaluate, experiments, run, synth
from srland.config import LOG_LEVEL
from srland.exceptions import SRLandError

logger = logging.getLogger('srland')

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_IO = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog='srland', description='Spatially regularized active diffusion learning')
    parser.add_argument('--version', action='version', version=f"%(prog)s {__version__}")
    parser.add_argument('--log-level', default=LOG_LEVEL,
                        choices=['DEBUG', 'INFO', 'WARNING', 'ERROR'])
    sub = parser.add_subparsers(dest='command', required=True, parser_class=_Parser)
    synth.register(sub)
    run.register(sub)
    experiments.register(sub)
    evaluate.register(sub)
    return parser


def _configure_logging(level: str) -> None:
    logging.basicConfig(level=getattr(logging, level.upper(), logging.INFO),
                        format='%(asctime)s %(levelname)s %(name)s: %(message)s',
                        stream=sys.stderr)


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _configure_logging(args.log_level)
    try:
        args.handler(args)
    except SRLandError as e:
        logger.error("%s failed: %s", args.command, e)
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code
    except OSError as e:
        logger.error("%s failed: %s", args.command, e)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == '__main__':
    sys.exit(main())

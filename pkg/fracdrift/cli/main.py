"""
Distributed under the terms of the BSD 3-Clause License.

The full license is in the file LICENSE, distributed with this software.

Author: Jun Zhu
"""
import argparse
import logging
import sys
from typing import List, Optional

from scipy.linalg import LinAlgError

from ..exceptions import ConfigError, FracDriftError
from ..utility import parse_seed
from .commands import COMMANDS, run_command
from .run_config import load_run_config

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_USAGE = 2

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def _seed(text: str) -> int:
    try:
        return parse_seed(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e))


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid integer: {text!r}")
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected >= 1, got {v}")
    return v


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fracdrift",
        description="Estimation of the drift of a fractional Brownian "
                    "motion.")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--config', required=True,
                        help="JSON run configuration")
    common.add_argument('--out', default=".",
                        help="output directory (default: current directory)")
    common.add_argument('--seed', type=_seed,
                        help="unsigned 64-bit seed, overrides the config")
    common.add_argument('--format', choices=("csv", "json"), default="csv",
                        help="format of tabular outputs (default: csv)")
    common.add_argument('--input',
                        help="observation path CSV 't,value' as written by "
                             "'simulate'; simulated from the config when "
                             "omitted")
    common.add_argument('--workers', type=_positive_int, default=1,
                        help="threads of the 'mc' command (default: 1)")
    common.add_argument('--log-level', default="INFO",
                        choices=("DEBUG", "INFO", "WARNING", "ERROR"),
                        help="logging level (default: INFO)")

    subparsers = parser.add_subparsers(dest="command", metavar="command",
                                       required=True)
    for name, (description, _) in COMMANDS.items():
        subparsers.add_parser(name, parents=[common], help=description,
                              description=description)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Run the command line interface.

    :return int: 0 on success, 1 on a runtime or numerical error, 2 on an
        invalid command line or configuration.
    """
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # --help exits with 0
        return e.code if isinstance(e.code, int) else EXIT_USAGE

    logging.basicConfig(level=args.log_level, format=LOG_FORMAT)

    try:
        cfg = load_run_config(args.config)
        return run_command(args, cfg)
    except ConfigError as e:
        logger.error("Invalid configuration: %s", e)
        return EXIT_USAGE
    except (FracDriftError, LinAlgError, FloatingPointError, ValueError,
            OSError) as e:
        logger.error("Command '%s' failed: %s", args.command, e)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())

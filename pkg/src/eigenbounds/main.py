#!/usr/bin/env python3
"""
eigenbounds - command-line entry point
"""
import argparse
import json
import sys
from typing import List, Optional

from loguru import logger

from eigenbounds.data.run_config import RunConfig
from eigenbounds.exceptions import ConfigError, NumericalError
from eigenbounds.processing.runner import BoundsRunner
from eigenbounds.storage.writers import ResultWriter
from eigenbounds.utils.logging import setup_logging

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
TABLE_FLOAT_FORMAT = '%.4f'


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='eigenbounds',
                                     description='Lower and upper bounds for one-electron molecular eigenvalues')
    parser.add_argument('--log-level', default=None, help='loguru level (default from LOG_LEVEL)')
    parser.add_argument('--log-file', default=None, help='also log to this file')
    commands = parser.add_subparsers(dest='command', required=True)

    bounds = commands.add_parser('bounds', help='compute bounds for a JSON run configuration')
    bounds.add_argument('--config', required=True, help='path to the run configuration')
    bounds.add_argument('--out', default=None, help='output file (default: configuration, else stdout)')
    bounds.add_argument('--format', choices=('csv', 'json'), default=None)

    reproduce = commands.add_parser('reproduce', help='recompute a reference table')
    reproduce.add_argument('--table', type=int, choices=(1, 2, 3), required=True)
    reproduce.add_argument('--out', default=None, help='output file (default: stdout)')
    reproduce.add_argument('--format', choices=('csv', 'json'), default='csv')
    return parser


def _error_record(error: Exception) -> str:
    return json.dumps({'error': type(error).__name__, 'message': str(error)})


def run(args: argparse.Namespace) -> None:
    if args.command == 'bounds':
        config = RunConfig.from_file(args.config)
        fmt = args.format or config.output_format
        reports = BoundsRunner(quad=config.quadrature).run_bounds(config)
        ResultWriter(fmt).write_reports(reports, args.out or config.output_path)
    else:
        frame = BoundsRunner().reproduce_table(args.table)
        float_format = TABLE_FLOAT_FORMAT if args.format == 'csv' else '%.15g'
        ResultWriter(args.format, float_format=float_format).write_table(frame, args.out)


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    setup_logging(args.log_level, args.log_file)

    try:
        run(args)
    except ConfigError as e:
        logger.error(f"Configuration error: {e}")
        sys.stderr.write(_error_record(e) + '\n')
        return EXIT_CONFIG
    except NumericalError as e:
        logger.error(f"Numerical failure: {e}")
        sys.stderr.write(_error_record(e) + '\n')
        return EXIT_NUMERICAL

    logger.success(f"{args.command} finished")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

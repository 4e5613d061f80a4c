"""Command line entry point: run one verification job per invocation.

Exit status: 0 when every check passes, 1 when any check fails, 2 for
usage or parse errors.  The CHECKERBOARD_LOG environment variable selects
the logging level (debug, info, warning, ...).
"""
from __future__ import annotations

import argparse
import logging
import os
import sys

from .errors import InsufficientMoments, OddTruncation, ParseError, PatternViolation
from .jobs import COMMANDS, ingest, run

log = logging.getLogger("checkergram")

_USAGE_ERRORS = (ParseError, PatternViolation, OddTruncation, InsufficientMoments)


def _configure_logging():
    level = os.environ.get("CHECKERBOARD_LOG", "warning").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="checkergram",
        description="Factor checkerboard Gram matrices and verify the "
                    "structural identities of their biorthogonal families.")
    parser.add_argument("--input", required=True, help="path to a JSON job file")
    parser.add_argument("--command", choices=COMMANDS, default=None,
                        help="command to run (default: the file's, else verify)")
    parser.add_argument("--nmax", type=int, default=None,
                        help="largest kernel index bound (default: maximal)")
    parser.add_argument("--tolerance", type=float, default=None,
                        help="residual tolerance for float mode (default 1e-10)")
    parser.add_argument("--emit-matrices", action="store_true",
                        help="include factor matrices in the report")
    return parser


def main(argv=None) -> int:
    _configure_logging()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        config = ingest(args.input)
    except _USAGE_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: cannot read {args.input}: {exc}", file=sys.stderr)
        return 2
    if args.command is not None:
        config.command = args.command
    if args.nmax is not None:
        config.nmax = args.nmax
    if args.tolerance is not None:
        if args.tolerance <= 0:
            print("error: tolerance must be positive", file=sys.stderr)
            return 2
        config.tolerance = args.tolerance
    if args.emit_matrices:
        config.emit_matrices = True
    log.info("running %s on %s", config.command, args.input)
    try:
        report = run(config)
    except _USAGE_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(report.to_json())
    return 0 if report.passed else 1


if __name__ == "__main__":
    sys.exit(main())

"""
    Pieces shared by the workflows: the argument parser and the mapping of
    failures to exit codes.

        0  success
        1  usage error: bad flags, unreadable or invalid inputs
        2  the check suite found a failing property
        3  runtime failure after the inputs were accepted
"""
from __future__ import annotations
from typing import Callable, List
import argparse as ap
import sys

from .._logging import get_logger, set_verbosity
from ..errors import KernliError
from ..utils import ForeColor

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_CHECK = 2
EXIT_RUNTIME = 3

log = get_logger(__name__)


class WorkflowParser(ap.ArgumentParser):
    """Argument parser that reports usage errors with exit status 1"""

    def __init__(self, prog: str, **kwargs):
        super().__init__(prog=f"kernli {prog}", **kwargs)
        self.add_argument(
            "-v", "--verbose",
            action="count",
            default=0,
            help="more log output (-v info, -vv debug)",
        )

    def error(self, message: str):
        self.print_usage(sys.stderr)
        print_error(message)
        sys.exit(EXIT_USAGE)


def print_error(message) -> None:
    with ForeColor("red", file=sys.stderr):
        print("error:", end="", file=sys.stderr)
    print(f" {message}", file=sys.stderr)


def run_workflow(
    parser: WorkflowParser,
    argv: List[str],
    resolve: Callable[[ap.Namespace], object],
    execute: Callable[[ap.Namespace, object], int],
) -> int:
    """
    Parse `argv`, turn the arguments into inputs with `resolve`, then run `execute`.
    Failures in `resolve` are usage errors, failures in `execute` are runtime errors.
    """
    try:
        parsed = parser.parse_args(argv)
    except SystemExit as xc:
        return EXIT_OK if xc.code in (0, None) else EXIT_USAGE

    set_verbosity(parsed.verbose)

    try:
        inputs = resolve(parsed)
    except (KernliError, OSError) as xc:
        print_error(xc)
        return EXIT_USAGE

    try:
        return execute(parsed, inputs)
    except Exception as xc:
        log.debug("workflow failed", exc_info=True)
        print_error(f"{type(xc).__name__}: {xc}")
        return EXIT_RUNTIME

"""
    Run the property suite on freshly drawn random instances.
    The base seed is printed so a failing run can be replayed with --seed.
"""
from __future__ import annotations

import numpy as np

from ._core import EXIT_CHECK, EXIT_OK, WorkflowParser, run_workflow
from ..suite import CHECKS, run_suite
from ..utils import ForeColor

parser = WorkflowParser("check", description="Verify the kernel theory numerically")

parser.add_argument("-s", "--seed", type=int, help="base seed (default: fresh entropy)")
parser.add_argument(
    "--only",
    action="append",
    metavar="<check>",
    choices=list(CHECKS),
    help="run only this check (repeatable)",
)
parser.add_argument("-l", "--list", action="store_true", help="list available checks and exit")


def resolve(parsed) -> int:
    if parsed.seed is not None:
        return parsed.seed
    return int(np.random.SeedSequence().entropy)


def execute(parsed, seed: int) -> int:
    if parsed.list:
        for name, entry in CHECKS.items():
            print(f"{name:<26} [{entry.theorem}] {entry.description}")
        return EXIT_OK

    print(f"Property suite, seed {seed}")
    results = run_suite(seed, parsed.only)

    for r in results:
        color, tag = ("green", "PASS") if r.passed else ("red", "FAIL")
        with ForeColor(color):
            print(f"[{tag}]", end="")
        print(
            f" {r.name:<26} [{r.theorem}] observed {r.observed:.3e}  bound {r.bound:.3e}"
            f"  ({r.trials} trials, {r.seconds:.2f} s)  {r.description}"
        )
        if not r.passed and r.detail:
            print(f"       {r.detail}")

    failed = [r.name for r in results if not r.passed]
    if failed:
        print(f"{len(failed)} of {len(results)} checks failed: {', '.join(failed)}")
        print(f"Replay with: python -m kernli check --seed {seed}")
        return EXIT_CHECK

    print(f"All {len(results)} checks passed")
    return EXIT_OK


def main(argv) -> int:
    return run_workflow(parser, argv, resolve, execute)

"""
    Run the benchmark grid (dataset x model x kernel x seed) and write the raw table,
    a mean/std summary over seeds and an accuracy table with one column per dataset.

    Without --config the default grid is used: SmallGap and SmallRatio presets,
    five kernels, GCN and SGC, seeds 0-4.
"""
from __future__ import annotations
from dataclasses import replace

from ._core import EXIT_OK, WorkflowParser, run_workflow
from ..bench import BenchConfig, default_config, run_grid, write_results
from ..errors import ConfigError
from ..utils import WCTimer

parser = WorkflowParser("bench", description="Run the kernel comparison grid")

parser.add_argument("-c", "--config", metavar="<bench.yaml>", help="bench configuration (YAML or JSON)")
parser.add_argument("-o", "--out", metavar="<results.csv>", help="raw results CSV (overrides config 'output')")
parser.add_argument("-w", "--workers", type=int, help="parallel worker processes")
parser.add_argument("--timing", action="store_true", help="record per cell wall time")


def resolve(parsed) -> BenchConfig:
    cfg = BenchConfig.from_file(parsed.config) if parsed.config else default_config()

    overrides = {}
    if parsed.out:
        overrides["output"] = parsed.out
    if parsed.workers is not None:
        overrides["workers"] = parsed.workers
    if parsed.timing:
        overrides["timing"] = True
    cfg = replace(cfg, **overrides)

    if not cfg.output:
        raise ConfigError("No output path: pass --out or set 'output' in the config")
    return cfg


def execute(parsed, cfg: BenchConfig) -> int:
    print(f"Running {cfg.grid_size} cells on {cfg.workers} worker(s)")

    with WCTimer("bench grid", verbose=parsed.verbose > 0):
        raw = run_grid(cfg)

    paths = write_results(raw, cfg.output)
    failed = int(raw["error"].notna().sum())

    print(f"Raw results: <{paths[0]}>")
    print(f"Summary:     <{paths[1]}>")
    print(f"Table:       <{paths[2]}>")
    if failed:
        print(f"{failed} of {len(raw)} cells failed; see the 'error' column")
    return EXIT_OK


def main(argv) -> int:
    return run_workflow(parser, argv, resolve, execute)

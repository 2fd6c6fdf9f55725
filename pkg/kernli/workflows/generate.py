"""
    Generate a stochastic block model dataset directory.

    python -m kernli generate --preset smallgap --seed 7 --out data/smallgap-7
"""
from __future__ import annotations
from dataclasses import replace

from ._core import EXIT_OK, WorkflowParser, run_workflow
from .. import _config
from ..errors import ConfigError
from ..synth import PRESETS, SbmConfig, density_stats, export, generate, get_preset

parser = WorkflowParser("generate", description="Write a block model dataset directory")

src = parser.add_mutually_exclusive_group()

src.add_argument(
    "-p", "--preset",
    action="store",
    choices=sorted(PRESETS),
    help="start from a named parameter preset (default: smallgap)",
)

src.add_argument(
    "-c", "--config",
    action="store",
    metavar="<sbm.yaml>",
    help="start from an SbmConfig mapping in a YAML/JSON file",
)

parser.add_argument("-s", "--seed", type=int, help="generator seed (overrides preset/config)")
parser.add_argument("--class-sizes", metavar="N1,N2,...", help="comma separated class sizes")
parser.add_argument("--p-intra", type=float, metavar="<p>")
parser.add_argument("--q-inter", type=float, metavar="<q>")
parser.add_argument("--feature-dim", type=int, metavar="<d>")
parser.add_argument("--feature-mean-scale", type=float, metavar="<mu>")
parser.add_argument("--feature-std", type=float, metavar="<sigma>")
parser.add_argument("--split-fractions", type=float, nargs=3, metavar=("TRAIN", "VAL", "TEST"))

parser.add_argument(
    "-o", "--out",
    action="store",
    required=True,
    metavar="<dir>",
    help="output dataset directory (created if missing)",
)


def sbm_config(parsed) -> SbmConfig:
    if parsed.config:
        cfg = SbmConfig.from_dict(_config.load_config(parsed.config))
    else:
        cfg = get_preset(parsed.preset or "smallgap")

    overrides = {
        "p_intra": parsed.p_intra,
        "q_inter": parsed.q_inter,
        "feature_dim": parsed.feature_dim,
        "feature_mean_scale": parsed.feature_mean_scale,
        "feature_std": parsed.feature_std,
        "seed": parsed.seed,
    }
    if parsed.class_sizes:
        try:
            overrides["class_sizes"] = tuple(int(x) for x in parsed.class_sizes.split(","))
        except ValueError:
            raise ConfigError(f"--class-sizes expects comma separated integers, got {parsed.class_sizes!r}")
    if parsed.split_fractions:
        overrides["split_fractions"] = tuple(parsed.split_fractions)

    return replace(cfg, **{k: v for k, v in overrides.items() if v is not None})


def execute(parsed, cfg: SbmConfig) -> int:
    ds = generate(cfg)
    export(ds, parsed.out)

    s = ds.graph.summary()
    rho, eps, ratio = density_stats(cfg)

    print(f"Dataset written to <{parsed.out}>")
    print(f"  nodes {s['n']}, edges {s['edges']}, mean degree {s['mean_degree']:.3f}")
    print(f"  classes {s['classes']}, feature dim {s['feature_dim']}, seed {cfg.seed}")
    print(f"  density rho = {rho:.6g}, density gap eps = {eps:.6g}, label ratio = {ratio:.6g}")
    print(f"  connected components {s['components']}")
    print(f"  split {ds.split.sizes()}")
    return EXIT_OK


def main(argv) -> int:
    return run_workflow(parser, argv, sbm_config, execute)

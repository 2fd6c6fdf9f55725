"""
    Train one model on one dataset with one kernel and write the report as JSON.

    python -m kernli train --dataset data/smallgap-7 --kernel poisson:r=0.5 --arch GCN --report run.json
"""
from __future__ import annotations
import os

from ._core import EXIT_OK, WorkflowParser, run_workflow
from .. import _config
from ..dtypes import Dataset
from ..kernels import parse_kernel
from ..models import ARCHS, ModelConfig, train

parser = WorkflowParser("train", description="Train a GCN or SGC node classifier")

parser.add_argument("-d", "--dataset", required=True, metavar="<dir>", help="dataset directory")
parser.add_argument("-k", "--kernel", required=True, metavar="<kernel>", help='e.g. "poisson:r=0.5"')
parser.add_argument("-a", "--arch", type=str.upper, choices=ARCHS, help="model architecture")
parser.add_argument("-c", "--config", metavar="<model.yaml>", help="ModelConfig mapping; flags override it")
parser.add_argument("--hidden-dim", type=int)
parser.add_argument("--epochs", type=int)
parser.add_argument("--learning-rate", type=float)
parser.add_argument("--weight-decay", type=float)
parser.add_argument("--sgc-power", type=int)
parser.add_argument("--optimizer", choices=("adam", "sgd"))
parser.add_argument("-s", "--seed", type=int, help="weight initialization seed")
parser.add_argument("-r", "--report", metavar="<report.json>", help="write the TrainReport here")

_FLAG_KEYS = ("arch", "hidden_dim", "epochs", "learning_rate", "weight_decay", "sgc_power", "optimizer")


def resolve(parsed):
    ds = Dataset.from_dir(parsed.dataset)
    spec = parse_kernel(parsed.kernel)

    d = _config.load_config(parsed.config) if parsed.config else {}
    d.update({k: getattr(parsed, k) for k in _FLAG_KEYS if getattr(parsed, k) is not None})
    if parsed.seed is not None:
        d["init_seed"] = parsed.seed

    return ds, spec, ModelConfig.from_dict(d)


def execute(parsed, inputs) -> int:
    ds, spec, cfg = inputs
    report = train(ds, spec, cfg)

    if parsed.report:
        d = os.path.dirname(os.path.abspath(parsed.report))
        os.makedirs(d, exist_ok=True)
        with open(parsed.report, "wt") as f:
            f.write(report.to_json() + "\n")

    acc = report.accuracy
    fmt = lambda x: "n/a" if x is None else f"{x:.4f}"
    print(f"{cfg.arch} with {spec}: best epoch {report.best_epoch} of {report.epochs}")
    print(f"  train {fmt(acc['train'])}  val {fmt(acc['val'])}")
    print(f"  test accuracy {fmt(acc['test'])}")
    return EXIT_OK


def main(argv) -> int:
    return run_workflow(parser, argv, resolve, execute)

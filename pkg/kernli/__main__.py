import kernli as kl
from importlib import import_module
import sys


def main(args) -> int:
    if not args or args[0] in ("help", "--help", "-h"):
        print(f"KERNLI {kl.__version__}")
        print("usage: python -m kernli <workflow> [flags]")
        print("List of available workflows:")
        for wfa in kl.workflows.__all__:
            print(f"\t{wfa}")
        return 0 if args else 1

    wf = args[0]

    if wf not in kl.workflows.__all__:
        print(f"Error: workflow <{wf}> not recognized.", file=sys.stderr)
        print("List of available workflows:", file=sys.stderr)
        for wfa in kl.workflows.__all__:
            print(f"\t{wfa}", file=sys.stderr)
        return 1

    mod = import_module(f"kernli.workflows.{wf}")
    return mod.main(args[1:])


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))

# Command line workflows, run as `python -m kernli <workflow> [flags]`.
# Every workflow module defines `parser` and `main(argv) -> exit code`.


# UPDATE __ALL__ TO MAKE WORKFLOW AVAILABLE TO THE PUBLIC
__all__ = [
    "generate",
    "spectrum",
    "train",
    "bench",
    "check",
]

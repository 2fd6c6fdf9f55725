"""
    Exception hierarchy of the package.
    Every error raised on purpose derives from `KernliError`,
    and from `ValueError` where the cause is a bad input.
"""


class KernliError(Exception):
    """Base class for all errors raised by kernli"""


class GraphError(KernliError, ValueError):
    """
    Invalid graph, or a graph operation that is undefined for this graph.
    `node` is set when a single node is responsible (isolated node etc.)
    """

    def __init__(self, msg: str, node: int = None):
        super().__init__(msg)
        self.node = node


class NumericsError(KernliError, ValueError):
    """
    Input violates the preconditions of a linear algebra routine
    """

    def __init__(self, msg: str, asymmetry: float = None):
        super().__init__(msg)
        self.asymmetry = asymmetry


class NotPositiveDefiniteError(NumericsError):
    def __init__(self, pivot: int):
        super().__init__(f"Matrix is not positive definite (pivot {pivot})")
        self.pivot = pivot


class KernelSpecError(KernliError, ValueError):
    """
    Bad kernel parameters or an unparseable kernel string.
    `token` is the offending piece of the string, if any.
    """

    def __init__(self, msg: str, token: str = None):
        super().__init__(msg)
        self.token = token


class ConfigError(KernliError, ValueError):
    """Invalid generator, split, model or benchmark configuration"""


class DatasetFormatError(KernliError, ValueError):
    """
    Malformed dataset directory. `path` and `line` (1-based) point at the problem.
    """

    def __init__(self, msg: str, path: str = None, line: int = None):
        where = ""
        if path is not None:
            where = f"{path}" + (f":{line}" if line is not None else "") + ": "
        super().__init__(where + msg)
        self.path = path
        self.line = line


class ShapeError(KernliError, ValueError):
    """Dimension mismatch between operands (or a stale forward cache)"""

    def __init__(self, msg: str, *shapes):
        if shapes:
            msg = msg + " " + " vs ".join(str(tuple(s)) for s in shapes)
        super().__init__(msg)
        self.shapes = shapes

"""
    Console coloring and wall clock timing used by the workflows, the suite and the bench.
"""
from time import perf_counter
from typing import Optional, TextIO
import sys

import colorama

from ._logging import get_logger

log = get_logger(__name__)


class ForeColor:
    """
    Colors everything written to `file` inside the block
    """

    COLORS = {
        "red": colorama.Fore.RED,
        "green": colorama.Fore.GREEN,
        "yellow": colorama.Fore.YELLOW,
        "default": colorama.Fore.RESET,
    }

    def __init__(self, color: str = "default", file: Optional[TextIO] = None):
        key = color.lower()
        if key not in self.COLORS:
            raise KeyError(f"Unknown color '{color}'. Available: {sorted(self.COLORS)}")
        self.code = self.COLORS[key]
        self.file = file

    @property
    def stream(self) -> TextIO:
        return self.file if self.file is not None else sys.stdout

    def __enter__(self):
        self.stream.write(self.code)
        return self

    def __exit__(self, *args):
        self.stream.write(colorama.Style.RESET_ALL)


class WCTimer:
    """
    Wall clock timer. `elapsed` is in seconds and keeps running until the block exits.
    With `verbose` the total is logged at INFO level.
    """

    def __init__(self, desc: str = "", verbose: bool = False):
        self.desc = desc
        self.verbose = verbose
        self._start = None
        self._stop = None

    def __enter__(self):
        self._start = perf_counter()
        self._stop = None
        return self

    def __exit__(self, *args):
        self._stop = perf_counter()
        if self.verbose:
            log.info(str(self))

    @property
    def elapsed(self) -> Optional[float]:
        if self._start is None:
            return None
        return (self._stop if self._stop is not None else perf_counter()) - self._start

    def __str__(self):
        state = "done" if self._stop is not None else "running"
        return f"{self.desc}: {self.elapsed or 0.0:.3f} s ({state})"

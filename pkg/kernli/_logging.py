"""
    This module sets up the logging functionality.
    All loggers live under the `kernli` root and share one colored console handler.
"""
from __future__ import annotations
import logging as lg
import os
from contextlib import contextmanager

import colorama

_LEVEL_COLORS = {
    "DEBUG": colorama.Fore.BLUE,
    "INFO": colorama.Fore.GREEN,
    "WARNING": colorama.Fore.YELLOW,
    "ERROR": colorama.Fore.RED,
    "CRITICAL": colorama.Fore.MAGENTA,
}


class ColorFormatter(lg.Formatter):
    def format(self, record: lg.LogRecord) -> str:
        msg = super().format(record)
        c = _LEVEL_COLORS.get(record.levelname, "")
        return f"{c}{record.levelname:<8}{colorama.Style.RESET_ALL} {msg}"


_root = lg.getLogger("kernli")

if not _root.handlers:
    _handler = lg.StreamHandler()
    _handler.setFormatter(ColorFormatter("%(name)s: %(message)s"))
    _root.addHandler(_handler)
    _root.setLevel(os.environ.get("KERNLI_LOGLEVEL", "WARNING").upper())
    _root.propagate = False


def get_logger(name: str) -> lg.Logger:
    if not name.startswith("kernli"):
        name = f"kernli.{name}"
    return lg.getLogger(name)


def set_verbosity(verbose: int):
    """
    1 -> INFO, 2+ -> DEBUG. 0 keeps the level from KERNLI_LOGLEVEL.
    """
    if verbose > 0:
        _root.setLevel(lg.INFO if verbose == 1 else lg.DEBUG)


@contextmanager
def silenced(name: str, level: int = lg.ERROR):
    """Raise the threshold of one logger inside the block"""
    logger = get_logger(name)
    old = logger.level
    logger.setLevel(level)
    try:
        yield logger
    finally:
        logger.setLevel(old)

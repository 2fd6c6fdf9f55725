import io
import logging

import colorama
import pytest

from kernli._logging import get_logger, silenced
from kernli.utils import ForeColor, WCTimer


class TestForeColor:
    def test_wraps_output(self):
        buf = io.StringIO()
        with ForeColor("green", file=buf):
            buf.write("ok")
        assert buf.getvalue() == f"{colorama.Fore.GREEN}ok{colorama.Style.RESET_ALL}"

    def test_unknown_color(self):
        with pytest.raises(KeyError):
            ForeColor("chartreuse")


class TestWCTimer:
    def test_elapsed(self):
        t = WCTimer("x")
        assert t.elapsed is None
        with t:
            running = t.elapsed
        assert 0.0 <= running <= t.elapsed
        assert t.elapsed == t.elapsed
        assert str(t).startswith("x: ") and "done" in str(t)

    def test_verbose_logs(self, caplog, monkeypatch):
        monkeypatch.setattr(logging.getLogger("kernli"), "propagate", True)
        with caplog.at_level(logging.INFO, logger="kernli.utils"):
            with WCTimer("grid", verbose=True):
                pass
        assert any("grid" in r.getMessage() for r in caplog.records)


def test_silenced_restores_level():
    log = get_logger("kernli.synth")
    before = log.level
    with silenced("kernli.synth") as lg:
        assert lg.level == logging.ERROR
    assert log.level == before

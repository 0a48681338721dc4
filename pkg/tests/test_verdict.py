import logging

import pytest

from cubench import log
from cubench.verdict import CheckLine, Status, Verdict


def test_check_line_renders_details():
    line = CheckLine.of("comp.N.line9", Status.PASS, solver="nabla", result="(b b)")
    assert line.render() == "CHECK comp.N.line9 PASS solver=nabla result=(b_b)"
    back = CheckLine.parse(line.render())
    assert (back.name, back.status) == ("comp.N.line9", Status.PASS)
    assert dict(back.details)["result"] == "(b_b)"


def test_only_check_lines_parse():
    with pytest.raises(ValueError):
        CheckLine.parse("RESULT line 9: a")


def test_verdict_from_failures():
    assert Verdict.from_failures([]).ok
    failed = Verdict.from_failures(["broken"], checked=2)
    assert failed.status is Status.FAIL
    assert failed.details == {"checked": 2}


@pytest.mark.parametrize("verbosity, level", [
    (-1, logging.ERROR), (0, logging.WARNING), (1, logging.INFO), (2, logging.DEBUG), (5, logging.DEBUG),
])
def test_verbosity_levels(verbosity, level):
    assert log.level_for(verbosity) == level


def test_configure_adds_one_handler():
    logger = log.configure(1)
    log.configure(2)
    assert sum(1 for h in logger.handlers if getattr(h, "_cubench", False)) == 1
    assert logger.level == logging.DEBUG
    log.configure(0)

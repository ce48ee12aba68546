import os
import sys

import pytest
from mpmath import mp

sys.path.insert(0, os.path.dirname(__file__))


@pytest.fixture(autouse=True)
def _reset_mp_precision():
    # Keep one test's global mpmath precision from leaking into the next.
    prec = mp.prec
    yield
    mp.prec = prec


@pytest.fixture
def prec128():
    with mp.workprec(128):
        yield 128


@pytest.fixture
def prec256():
    with mp.workprec(256):
        yield 256


# One line per acceptance criterion, printed after the run.
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

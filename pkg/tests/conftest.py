import math

import pytest

from parabattery import SystemParams

SQ = 1.0 / math.sqrt(2.0)


@pytest.fixture
def weak():
    """nu=0, Delta=0, R=0.4: overdamped reference point."""
    return SystemParams(nu=0.0, delta=0.0, rabi_ratio=0.4)


@pytest.fixture
def strong():
    return SystemParams.compensated(-0.3, 50.0)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    lines = getattr(mod, "LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)

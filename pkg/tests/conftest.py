import sys

import mpmath
import pytest

from qconv import QContext

Q = 0.5
GAMMA = 0.9


@pytest.fixture
def ctx():
    return QContext(Q, order=32)


def mp_cq(q, gamma, terms=400, dps=40):
    """Jackson integral of 1/(-x²;q²)_∞ over ±q^k γ at high precision."""
    with mpmath.workdps(dps):
        q = mpmath.mpf(q)
        g = mpmath.mpf(gamma)
        total = mpmath.mpf(0)
        for k in range(-terms // 4, terms):
            x = g * q**k
            total += 2 * (1 - q) * x / mpmath.qp(-x * x, q * q)
        return float(total)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)

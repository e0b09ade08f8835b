import math

import numpy as np
import pytest

from emgr.metrics import MetricSpec


@pytest.fixture
def rng():
    return np.random.default_rng(0)


def rel(a, b):
    a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    return np.max(np.abs(a - b) / np.abs(b))


@pytest.fixture
def reg_static():
    return MetricSpec.scaled("static", "regularized", 1.0)


HALF_PI = 0.5 * math.pi


_ACCEPTANCE = []


@pytest.fixture
def criterion(request):
    """Record one acceptance line: ``criterion(number, ok, detail)`` then assert ok."""

    def record(number, ok, detail):
        line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
        _ACCEPTANCE.append((number, line))
        print(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(_ACCEPTANCE):
        terminalreporter.write_line(line)

import functools

import pytest

from coxclimb import Analysis

SMALL = ["A1", "A2", "A3", "B2", "B3", "H3", "I2(5)"]
MEDIUM = ["A4", "B4", "D4", "F4"] + [f"I2({m})" for m in range(3, 13)]
SUPPORTED = ["A1", "A2", "A3", "A4", "B2", "B3", "B4", "D4", "F4", "H3", "H4"] + [
    f"I2({m})" for m in range(3, 13)
]

ACCEPTANCE_LINES = []


@functools.lru_cache(maxsize=None)
def analysis(spec):
    return Analysis(spec)


@pytest.fixture
def get():
    """Cached :class:`Analysis` lookup by type symbol."""
    return analysis


@pytest.fixture
def acceptance_report():
    def report(label, ok, detail=""):
        ACCEPTANCE_LINES.append(f"{'PASS' if ok else 'FAIL'}  {label}  {detail}".rstrip())
    return report


@pytest.fixture(params=SMALL)
def small(request):
    return analysis(request.param)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

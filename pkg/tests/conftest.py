import numpy as np
import pytest

from afcmemory.medium import CombDesign


@pytest.fixture
def grid():
    return np.linspace(-1.5, 1.5, 4096)


@pytest.fixture
def fig3_design():
    # depth 30, finesse 5, no dephasing factor: the comb-extent study of the anchor map
    return CombDesign(d0=30.0, finesse=5.0, delta0=0.8, kappa=False)


_VERDICTS = []


@pytest.fixture
def verdict():
    """Record one pass/fail line for an acceptance criterion, then assert it."""

    def check(label, ok, detail):
        _VERDICTS.append(f"{'PASS' if ok else 'FAIL'}  {label}: {detail}")
        assert ok, f"{label}: {detail}"

    return check


def pytest_terminal_summary(terminalreporter):
    if _VERDICTS:
        terminalreporter.section("acceptance criteria")
        for line in _VERDICTS:
            terminalreporter.write_line(line)

import numpy as np
import pytest

import qtomo

ACCEPTANCE_LINES = []


@pytest.fixture
def report():
    """Record one pass/fail line per acceptance criterion."""

    def _record(label, ok, detail):
        ACCEPTANCE_LINES.append(f"{'PASS' if ok else 'FAIL'}  {label}: {detail}")
        return ok

    return _record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def phase_align(ref, other):
    """Rotate each column of ``other`` by the phase that best matches ``ref``."""
    ph = np.sum(ref.conj() * other, axis=0)
    ph = np.where(np.abs(ph) > 0, ph / np.abs(ph), 1.0)
    return other / ph


@pytest.fixture
def bell():
    return qtomo.bell_state()

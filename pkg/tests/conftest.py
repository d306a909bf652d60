"""Shared test fixtures and the acceptance-criteria reporter.

Acceptance tests call ``record(k, passed, detail)`` before asserting so the
terminal summary always prints one PASS/FAIL line per criterion, including
criteria that fail on purpose (see README for the expected outcomes).
"""

import numpy as np
import pytest

from iswapdd.model import GateParams

ACCEPTANCE = {}
CRITERIA_COUNT = 12


def record(criterion, passed, detail=""):
    """Store a criterion verdict for the terminal summary, then assert."""
    ACCEPTANCE[int(criterion)] = (bool(passed), str(detail))
    assert passed, f"criterion {criterion}: {detail}"


@pytest.fixture(scope="session")
def desk_gate():
    """The reference operating point used throughout the tests."""
    return GateParams(omega=1e11, omega_c=5e9)


@pytest.fixture()
def rng():
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(42)))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in range(1, CRITERIA_COUNT + 1):
        if k in ACCEPTANCE:
            passed, detail = ACCEPTANCE[k]
            status = "PASS" if passed else "FAIL"
        else:
            status, detail = "NOT RUN", ""
        line = f"criterion {k:2d}: {status}"
        if detail:
            line += f"  [{detail}]"
        terminalreporter.write_line(line)

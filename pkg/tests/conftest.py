"""Shared fixtures plus a terminal summary that prints one PASS/FAIL line
per acceptance criterion after the run."""

import numpy as np
import pytest

_acceptance_results = {}


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance.py" in report.nodeid:
        _acceptance_results[report.nodeid] = report.outcome


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _acceptance_results:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for nodeid in sorted(_acceptance_results):
        outcome = _acceptance_results[nodeid]
        label = "PASS" if outcome == "passed" else "FAIL"
        name = nodeid.split("::")[-1]
        terminalreporter.write_line(f"{label}  {name}")

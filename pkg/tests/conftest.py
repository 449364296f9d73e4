import os

import pytest
from hypothesis import HealthCheck, settings

from wavekk.cli import PRESETS

settings.register_profile("wavekk", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "wavekk"))

_CRITERIA = {}


@pytest.fixture
def record_criterion():
    """Record one acceptance line: (number, title, passed, detail)."""
    def record(number, title, passed, detail=""):
        line = f"[{'PASS' if passed else 'FAIL'}] criterion {number}: {title}"
        if detail:
            line += f" | {detail}"
        _CRITERIA[number] = line
        print(line)
        return passed
    return record


def pytest_terminal_summary(terminalreporter):
    if _CRITERIA:
        terminalreporter.section("acceptance criteria")
        for k in sorted(_CRITERIA, key=str):
            terminalreporter.write_line(_CRITERIA[k])


@pytest.fixture(scope="session")
def electron():
    return PRESETS["electron"]


@pytest.fixture(scope="session")
def molecule():
    return PRESETS["molecule"]


@pytest.fixture(scope="session")
def classical():
    return PRESETS["classical"]

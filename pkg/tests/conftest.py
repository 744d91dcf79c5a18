import os

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", deadline=None, max_examples=400)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

_ACCEPTANCE_KEY = pytest.StashKey[dict]()


@pytest.fixture
def record_criterion(request):
    """Store ``(passed, detail)`` under a criterion label for the end-of-run summary."""
    store = request.config.stash.setdefault(_ACCEPTANCE_KEY, {})

    def record(label, passed, detail=""):
        store[label] = (bool(passed), detail)

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    store = config.stash.get(_ACCEPTANCE_KEY, {})
    if not store:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(store, key=lambda s: int(s.split()[0])):
        passed, detail = store[label]
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  {label}  {detail}")

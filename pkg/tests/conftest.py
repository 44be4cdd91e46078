import numpy as np
import pytest

from openxxz.params import BulkParams, DerivedBoundary, derive_bare_from_pm

ACCEPTANCE_TITLES = {
    "AC1": "algebraic residuals",
    "AC2": "Bethe spectrum soundness",
    "AC3": "cross-representation amplitudes",
    "AC4": "closed-form spot checks",
    "AC5": "kernel identity and hole energy",
    "AC6": "density against Bethe roots",
    "AC7": "parametrization round trips",
    "AC8": "nonlocal charge spectrum",
    "AC9": "determinism",
}

_acceptance_outcomes: dict[str, list[bool]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(criterion): test belongs to an acceptance criterion")


def pytest_runtest_logreport(report):
    criterion = getattr(report, "acceptance_criterion", None)
    if criterion is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _acceptance_outcomes.setdefault(criterion, []).append(report.outcome == "passed")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    marker = item.get_closest_marker("acceptance")
    if marker is not None:
        outcome.get_result().acceptance_criterion = marker.args[0]


def pytest_terminal_summary(terminalreporter):
    if not _acceptance_outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for key, title in ACCEPTANCE_TITLES.items():
        results = _acceptance_outcomes.get(key)
        if results is None:
            status = "NOT RUN"
        else:
            status = "PASS" if all(results) else "FAIL"
        terminalreporter.write_line(f"{key} {status}: {title}")


@pytest.fixture
def bulk():
    return BulkParams(3.7)


@pytest.fixture
def derived():
    return DerivedBoundary.from_pm(0.8, 1.3)


@pytest.fixture
def boundary(bulk):
    return derive_bare_from_pm(0.8, 1.3, bulk)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)

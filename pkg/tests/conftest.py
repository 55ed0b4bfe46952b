import pytest

from boltzdiv.io import bundled_fixture, load_problem
from boltzdiv.model import make_problem

REF_E = [5, 10, 20, 25, 40]
REF_D = [4, 10, 24, 34, 53]
REF_FLAVORS = ["vanilla", "chocolate", "strawberry", "broccoli"]
REF_W = [
    [0.25, 0.25, 0.25, 0.25],
    [0.5, 0.25, 0.25, 0.0],
    [0.0, 1.0, 0.0, 0.0],
    [0.5, 0.0, 0.0, 0.5],
    [0.25, 0.25, 0.5, 0.0],
]


@pytest.fixture
def reference_homog():
    return make_problem(REF_E, REF_D)


@pytest.fixture
def reference_hetero():
    return make_problem(REF_E, REF_D, weights=REF_W, flavors=REF_FLAVORS)


@pytest.fixture
def reference_homog_file():
    return load_problem(bundled_fixture("reference_homog.json"))


_acceptance_results = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    if report.when == "call" or (report.when == "setup" and report.failed):
        number, title = marker.args
        _acceptance_results.append((number, title, report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance_results:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, outcome in sorted(_acceptance_results):
        verdict = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"[{verdict}] AC{number:>2}  {title}")

from importlib import resources
from pathlib import Path

import pytest

_criteria = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, text): acceptance criterion")


def pytest_runtest_logreport(report):
    marker = _markers.get(report.nodeid)
    if marker is None:
        return
    number, text = marker
    if report.when == "call" or report.outcome != "passed":
        outcome = {"passed": "PASS", "failed": "FAIL", "skipped": "SKIP"}[report.outcome]
        if report.when == "setup" and report.outcome == "failed":
            outcome = "ERROR"
        _criteria[number] = (outcome, text)


_markers = {}


def pytest_collection_modifyitems(items):
    for item in items:
        m = item.get_closest_marker("criterion")
        if m is not None:
            _markers[item.nodeid] = m.args


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        outcome, text = _criteria[number]
        terminalreporter.write_line(f"criterion {number}: {outcome:5} {text}")


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    with resources.as_file(resources.files("ctxsugg").joinpath("fixtures")) as path:
        yield Path(path)

import sys
from pathlib import Path

import pytest

import xreval

sys.path.insert(0, str(Path(__file__).parent))

DATA = Path(str(xreval.data_path("")))

_criteria: dict[int, tuple[str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.failed):
        return
    marker = getattr(report, "criterion", None)
    if marker is None:
        return
    number, title = marker
    status = "PASS" if report.passed else "FAIL"
    previous = _criteria.get(number)
    if previous is None or previous[1] == "PASS":
        _criteria[number] = (title, status)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is not None:
        rep.criterion = tuple(mark.args)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        title, status = _criteria[number]
        terminalreporter.write_line(f"criterion {number:2d} {status}: {title}")


@pytest.fixture(scope="session")
def data_dir():
    return DATA


@pytest.fixture(scope="session")
def catalog():
    return xreval.load_catalog(DATA / "boxstack.gomsops")


@pytest.fixture(scope="session")
def models(catalog):
    return xreval.load_modes(DATA / "boxstack.gomsmodel", catalog)

from pathlib import Path

import pytest

from mcvi import build_raw_panel, generate_fixture

REAL_DATA_DEFAULT = Path(__file__).parent / "data" / "unctad"
_criteria: dict[int, tuple[str, str]] = {}


def pytest_addoption(parser):
    parser.addoption(
        "--real-data", action="store", default=str(REAL_DATA_DEFAULT),
        help="directory with a real UNCTADstat pull (lsci.csv, lsbci.csv, plsci.csv, classifications.csv, external.csv)",
    )


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


@pytest.fixture(scope="session")
def real_data_dir(request) -> Path:
    return Path(request.config.getoption("--real-data"))


@pytest.fixture(scope="session")
def small_bundle():
    return generate_fixture(20, 5, 42)


@pytest.fixture(scope="session")
def small_raw(small_bundle):
    return build_raw_panel(small_bundle)


@pytest.fixture(scope="session")
def long_bundle():
    return generate_fixture(40, 20, 3)


def pytest_runtest_logreport(report):
    marker = getattr(report, "criterion", None)
    if marker is None:
        return
    num, name = marker
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        status = {"passed": "PASS", "failed": "FAIL", "skipped": "SKIP"}[report.outcome]
        if report.outcome == "skipped" and isinstance(report.longrepr, tuple):
            status += f" ({report.longrepr[2]})"
        _criteria[num] = (name, status)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    m = item.get_closest_marker("criterion")
    if m is not None:
        rep.criterion = (m.args[0], item.name)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_criteria):
        name, status = _criteria[num]
        terminalreporter.write_line(f"criterion {num:2d} {status.split(' ')[0]:4s} {name}{status[4:]}")

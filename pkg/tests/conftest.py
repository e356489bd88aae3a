"""Per-criterion pass/fail lines for the acceptance module."""

from collections import defaultdict

_CRITERIA: dict[str, tuple[int, str]] = {}
_OUTCOMES: dict[int, list[bool]] = defaultdict(list)
_TITLES: dict[int, str] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion covered by a test")


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark is not None:
            number, title = mark.args
            _CRITERIA[item.nodeid] = (number, title)
            _TITLES[number] = title


def pytest_runtest_logreport(report):
    entry = _CRITERIA.get(report.nodeid)
    if entry is None:
        return
    if report.when == "call" or report.failed or report.skipped:
        _OUTCOMES[entry[0]].append(report.passed and report.when == "call")


def pytest_terminal_summary(terminalreporter):
    if not _TITLES:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_TITLES):
        results = _OUTCOMES.get(number, [])
        status = "NOT RUN" if not results else ("PASS" if all(results) else "FAIL")
        terminalreporter.write_line(f"criterion {number}: {status}  {_TITLES[number]}")

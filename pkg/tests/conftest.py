"""Collects outcomes of tests marked ``criterion(n, label)`` into one line per criterion."""
from collections import defaultdict

import pytest

_OUTCOMES = defaultdict(list)
_LABELS = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, label): acceptance criterion check")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    number, label = mark.args
    _LABELS[number] = label
    if report.when == "call" or (report.when == "setup" and not report.passed):
        _OUTCOMES[number].append((item.name, report.passed))


def pytest_terminal_summary(terminalreporter):
    if not _OUTCOMES:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_OUTCOMES):
        results = _OUTCOMES[number]
        verdict = "PASS" if all(ok for _, ok in results) else "FAIL"
        failed = [name for name, ok in results if not ok]
        extra = f" (failing: {', '.join(failed)})" if failed else ""
        terminalreporter.write_line(f"CRITERION {number:>2} {verdict}: {_LABELS[number]}{extra}")

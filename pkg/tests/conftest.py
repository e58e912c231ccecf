"""Shared pytest wiring: a visible pass/fail line for every acceptance criterion."""

import re

_CRITERION = re.compile(r"test_criterion_0*(\d+)")
_results: dict[int, bool] = {}


def pytest_runtest_logreport(report):
    match = _CRITERION.search(report.nodeid)
    if not match:
        return
    num = int(match.group(1))
    if report.when == "call":
        _results[num] = _results.get(num, True) and report.passed
    elif report.failed:  # setup/teardown error counts as a failure
        _results[num] = False


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.write_line("")
    terminalreporter.write_line("acceptance criteria")
    for num in sorted(_results):
        state = "PASS" if _results[num] else "FAIL"
        terminalreporter.write_line(f"  criterion {num}: {state}")

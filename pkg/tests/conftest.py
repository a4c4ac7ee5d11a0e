import pytest

_criteria = []


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, text): acceptance criterion check")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        number, text = marker.args
        if report.skipped:
            status = "SKIP"
            reason = report.longrepr[2] if isinstance(report.longrepr, tuple) else ""
            text = f"{text} ({reason.removeprefix('Skipped: ')})"
        else:
            status = "PASS" if report.passed else "FAIL"
        _criteria.append((number, item.callspec.id if hasattr(item, "callspec") else "", status, text))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number, param, status, text in _criteria:
        label = f"{number}[{param}]" if param else number
        terminalreporter.write_line(f"{status:4} criterion {label}: {text}")

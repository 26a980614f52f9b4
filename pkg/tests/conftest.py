import pytest

_CRITERIA = {}


def pytest_runtest_logreport(report):
    crit = dict(report.user_properties).get("criterion")
    if crit is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        num, title = crit
        prev = _CRITERIA.get(num, (title, "PASS"))[1]
        status = "PASS" if report.outcome == "passed" and prev == "PASS" else "FAIL"
        _CRITERIA[num] = (title, status)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_CRITERIA):
        title, status = _CRITERIA[num]
        terminalreporter.write_line(f"criterion {num:>2}: {status}  {title}")


@pytest.fixture
def criterion(record_property):
    def tag(num, title):
        record_property("criterion", (num, title))

    return tag

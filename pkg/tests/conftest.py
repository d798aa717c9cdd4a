import numpy as np
import pytest

_criteria: list[tuple[str, str, str]] = []


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or report.when != "call":
        return
    detail = "; ".join(f"{k}={v}" for k, v in report.user_properties)
    _criteria.append((mark.args[0], "PASS" if report.passed else "FAIL", detail))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for label, status, detail in sorted(_criteria):
        line = f"{status}  {label}"
        terminalreporter.write_line(f"{line}: {detail}" if detail else line)

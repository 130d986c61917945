"""Shared fixtures.  Acceptance checks report one PASS/FAIL line each at the end of the run."""

import pytest

_REPORT = []


class CriterionLog:
    def __init__(self, number, title):
        self.number = number
        self.title = title
        self.checks = []

    def check(self, label, ok, detail=""):
        self.checks.append((label, bool(ok), detail))
        return bool(ok)

    @property
    def passed(self):
        return bool(self.checks) and all(ok for _, ok, _ in self.checks)

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        parts = "; ".join(f"{label}: {detail}{'' if ok else ' [out of tolerance]'}" for label, ok, detail in self.checks)
        return f"{status} criterion {self.number:>2} ({self.title}) {parts}"

    def assert_all(self):
        failed = [f"{label}: {detail}" for label, ok, detail in self.checks if not ok]
        assert not failed, "; ".join(failed)


@pytest.fixture
def criterion(request):
    marker = request.node.get_closest_marker("criterion")
    log = CriterionLog(*marker.args)
    yield log
    _REPORT.append(log)
    print("\n" + log.line())


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


def pytest_terminal_summary(terminalreporter):
    if not _REPORT:
        return
    terminalreporter.section("acceptance criteria")
    for log in sorted(_REPORT, key=lambda r: r.number):
        terminalreporter.write_line(log.line())

"""Shared pytest wiring: one PASS/FAIL line per acceptance check."""

_acceptance: dict[str, str] = {}


def pytest_runtest_logreport(report):
    if report.when != "call":
        return
    if "test_acceptance.py::" not in report.nodeid:
        return
    name = report.nodeid.rsplit("::", 1)[-1]
    _acceptance[name] = report.outcome


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _acceptance:
        return
    terminalreporter.write_sep("-", "acceptance summary")
    for name in sorted(_acceptance):
        status = "PASS" if _acceptance[name] == "passed" else "FAIL"
        terminalreporter.write_line(f"{name}: {status}")

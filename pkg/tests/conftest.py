from __future__ import annotations

import re

_CRITERION = re.compile(r"test_acceptance\.py::test_criterion_(\d+)_(\w+)")
_results: dict[int, tuple[str, str, str]] = {}


def pytest_runtest_logreport(report):
    m = _CRITERION.search(report.nodeid)
    if not m or (report.when != "call" and report.passed):
        return
    num = int(m.group(1))
    status = "PASS" if report.passed else "FAIL"
    detail = ""
    if report.failed:
        msg = str(report.longrepr.reprcrash.message) if hasattr(report.longrepr, "reprcrash") else str(report.longrepr)
        detail = msg.splitlines()[0][:300]
    if num not in _results or status == "FAIL":
        _results[num] = (status, m.group(2).replace("_", " "), detail)


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_results):
        status, name, detail = _results[num]
        line = f"{status} criterion {num}: {name}"
        terminalreporter.write_line(line + (f"  -- {detail}" if detail else ""))

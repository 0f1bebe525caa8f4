import re
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent))

_criteria: dict = {}


def pytest_runtest_logreport(report):
    m = re.search(r"test_acceptance\.py::test_ac(\d+)_", report.nodeid)
    if not m:
        return
    if report.when == "call" or report.failed:
        entry = _criteria.setdefault(int(m.group(1)), {"ok": True, "seconds": 0.0})
        entry["ok"] = entry["ok"] and report.passed
        entry["seconds"] += report.duration


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(_criteria):
        e = _criteria[k]
        terminalreporter.write_line(f"AC{k} {'PASS' if e['ok'] else 'FAIL'} ({e['seconds']:.2f} s)")

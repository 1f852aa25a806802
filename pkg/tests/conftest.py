import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

_CRITERIA: dict[int, dict] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    number, title = mark.args
    rec = _CRITERIA.setdefault(number, {"title": title, "ok": True, "seconds": 0.0, "ran": False})
    if rep.when == "call":
        rec["ran"] = True
        rec["seconds"] += rep.duration
    if rep.failed:
        rec["ok"] = False


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        rec = _CRITERIA[number]
        status = "PASS" if rec["ok"] and rec["ran"] else ("SKIP" if not rec["ran"] else "FAIL")
        terminalreporter.write_line(f"[{status}] {number:2d}. {rec['title']} ({rec['seconds']:.2f}s)")

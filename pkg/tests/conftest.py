from __future__ import annotations

from pathlib import Path

import pytest

DATA = Path(__file__).resolve().parents[1] / "src" / "genome_kit" / "data"
MAHA = DATA / "mahabharata"
MAHA_NS = "http://example.org/mahabharata#"

_acceptance: dict[int, list] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(n): test belongs to acceptance criterion n")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    marker = report.user_properties and dict(report.user_properties).get("criterion")
    if marker:
        _acceptance.setdefault(marker, []).append((report.nodeid, report.outcome))


def pytest_collection_modifyitems(items):
    for item in items:
        m = item.get_closest_marker("acceptance")
        if m:
            item.user_properties.append(("criterion", m.args[0]))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    from test_acceptance import CRITERIA

    terminalreporter.section("acceptance criteria")
    for n in sorted(_acceptance):
        results = _acceptance[n]
        failed = [nodeid for nodeid, outcome in results if outcome != "passed"]
        status = "PASS" if not failed else "FAIL"
        line = f"criterion {n} [{status}] {CRITERIA[n]} ({len(results) - len(failed)}/{len(results)} checks)"
        terminalreporter.write_line(line)
        for nodeid in failed:
            terminalreporter.write_line(f"    failed: {nodeid.split('::', 1)[1]}")


@pytest.fixture
def data_dir() -> Path:
    return DATA

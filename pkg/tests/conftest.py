from __future__ import annotations

import pytest

from inertiabound.certify import enumerate_gadgets
from inertiabound.graphs import delete_vertex, paley


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion number n")


@pytest.fixture(scope="session")
def p17():
    return paley(17)


@pytest.fixture(scope="session")
def p17_minus_0(p17):
    return delete_vertex(p17, 0)


@pytest.fixture(scope="session")
def p17_gadgets(p17):
    return enumerate_gadgets(p17, 3)


@pytest.fixture(scope="session")
def p17_minus_0_gadgets(p17_minus_0):
    return enumerate_gadgets(p17_minus_0.graph, 3)


_criteria: dict[int, dict] = {}


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    crit = report.user_properties and dict(report.user_properties).get("criterion")
    if not crit:
        return
    n, title = crit
    entry = _criteria.setdefault(n, {"title": title, "failed": [], "ran": 0})
    entry["ran"] += 1
    if report.outcome != "passed":
        entry["failed"].append(report.nodeid.split("::")[-1])


@pytest.hookimpl(tryfirst=True)
def pytest_runtest_setup(item):
    m = item.get_closest_marker("criterion")
    if m:
        item.user_properties.append(("criterion", (m.args[0], m.args[1])))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n in sorted(_criteria):
        e = _criteria[n]
        status = "FAIL" if e["failed"] else "PASS"
        line = f"criterion {n:>2}: {status}  {e['title']}"
        if e["failed"]:
            line += f"  (failed: {', '.join(e['failed'])})"
        tr.write_line(line)

import json
from functools import lru_cache
from pathlib import Path

import pytest

from gapsets import enumerate_gapsets_naive

FIXTURES = Path(__file__).parent / "fixtures"


@lru_cache(maxsize=None)
def naive(g):
    return tuple(enumerate_gapsets_naive(g))


@pytest.fixture(scope="session")
def naive_gapsets():
    return naive


@pytest.fixture(scope="session")
def a007323():
    return json.loads((FIXTURES / "a007323.json").read_text())["values"]


@pytest.fixture(autouse=True)
def _isolated_cache(tmp_path, monkeypatch):
    monkeypatch.setenv("GAPSET_CACHE", str(tmp_path / "counts.json"))


_criteria = {}


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.failed):
        return
    if "criterion" not in report.keywords:
        return
    number, title = dict(report.user_properties)["criterion"]
    _criteria[number] = (title, report.outcome)


def pytest_collection_modifyitems(items):
    for item in items:
        marker = item.get_closest_marker("criterion")
        if marker is not None:
            item.user_properties.append(("criterion", tuple(marker.args)))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        title, outcome = _criteria[number]
        verdict = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"criterion {number}: {verdict}  {title}")

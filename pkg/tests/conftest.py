import pathlib
import sys

import pytest

sys.path.insert(0, str(pathlib.Path(__file__).parent))

from k2metric import load_database  # noqa: E402

DATA = pathlib.Path(__file__).parent / "data"


@pytest.fixture
def table1_path():
    return DATA / "table1.csv"


@pytest.fixture
def table1(table1_path):
    return load_database(table1_path.read_text())


def pytest_terminal_summary(terminalreporter):
    lines = []
    for outcome in ("passed", "failed"):
        for rep in terminalreporter.stats.get(outcome, []):
            if rep.when == "call" and "test_acceptance.py::" in rep.nodeid:
                lines.append((rep.nodeid.split("::")[-1], outcome.upper()[:4]))
    if lines:
        terminalreporter.section("acceptance criteria")
        for name, status in sorted(lines):
            terminalreporter.write_line(f"{status}  {name}")

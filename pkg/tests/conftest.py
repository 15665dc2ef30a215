import sys
from pathlib import Path

import pytest

HERE = Path(__file__).resolve().parent
sys.path.insert(0, str(HERE))

from arithsurf.formats import load_model  # noqa: E402

FIXTURES = HERE.parent / "fixtures"
ACCEPTANCE_LINES: dict[int, str] = {}


def fixture_paths():
    return sorted(FIXTURES.glob("*.json"))


@pytest.fixture(scope="session")
def corpus():
    return {p.stem: load_model(str(p)) for p in fixture_paths()}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[n])

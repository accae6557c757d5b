import sys
from pathlib import Path

import pytest

REPO = Path(__file__).resolve().parent.parent
STORIES = REPO / "stories"


def pytest_terminal_summary(terminalreporter):
    # acceptance verdicts, one line per criterion, on any capture mode
    gate = sys.modules.get("test_acceptance")
    verdicts = getattr(gate, "VERDICTS", None) if gate else None
    if verdicts:
        terminalreporter.section("acceptance gate")
        for line in verdicts:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def story_text() -> str:
    return (STORIES / "ann_and_mary.dmn").read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def story_path() -> Path:
    return STORIES / "ann_and_mary.dmn"


@pytest.fixture(scope="session")
def graph_demo_path() -> Path:
    return STORIES / "rule_graph_demo.dmn"


@pytest.fixture(scope="session")
def revision_path() -> Path:
    return STORIES / "revision_demo.dmn"

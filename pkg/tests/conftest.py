from pathlib import Path

import pytest

from arigraph.embed import HashEmbedder

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture
def embedder():
    return HashEmbedder()


@pytest.fixture
def fixtures_dir():
    return FIXTURES


# acceptance results, filled by tests/test_acceptance.py and reported at the end of the run
ACCEPTANCE: dict[int, tuple[str, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        verdict, detail = ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number:>2}: {verdict:<4} {detail}")

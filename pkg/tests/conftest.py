import json
from pathlib import Path

import pytest

FIXTURES = Path(__file__).parent / "fixtures"

_ACCEPTANCE_RESULTS: list[tuple[str, str]] = []


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture
def refang_cases() -> dict:
    return json.loads((FIXTURES / "claims" / "refang_cases.json").read_text(encoding="utf-8"))


def record_acceptance(criterion: str, detail: str = ""):
    _ACCEPTANCE_RESULTS.append((criterion, detail))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for criterion, detail in _ACCEPTANCE_RESULTS:
        line = f"PASS  {criterion}"
        if detail:
            line += f"  [{detail}]"
        terminalreporter.write_line(line)

from pathlib import Path

import pytest

DATA = Path(__file__).parent / "data"

_CRITERIA: list[str] = []


@pytest.fixture
def criterion():
    """Record one acceptance line; the lines are replayed in the terminal summary."""

    def record(number: int, name: str, ok: bool, detail: str = "") -> bool:
        _CRITERIA.append(f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {name}" + (f" ({detail})" if detail else ""))
        print(_CRITERIA[-1])
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if _CRITERIA:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_CRITERIA, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)


@pytest.fixture
def fixture_dir() -> Path:
    return DATA / "fixture50"

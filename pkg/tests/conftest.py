from __future__ import annotations

import pytest

_LINES: dict[int, str] = {}


@pytest.fixture
def criterion(capsys):
    """Record and print the PASS/FAIL line of one acceptance criterion."""

    def report(number: int, ok: bool, detail: str) -> None:
        line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
        _LINES[number] = line
        with capsys.disabled():
            print(f"\n{line}")

    return report


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for number in sorted(_LINES):
            terminalreporter.write_line(_LINES[number])

"""Shared fixtures; collects acceptance-criterion lines for the run summary."""

from __future__ import annotations

import pytest

_ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def acceptance():
    """Record a one-line pass note for an acceptance criterion."""

    def record(criterion: str, detail: str = "") -> None:
        line = f"{criterion}: PASS"
        if detail:
            line += f"  ({detail})"
        _ACCEPTANCE_LINES.append(line)

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

"""Shared test plumbing: the acceptance suite reports one line per criterion."""

import pytest

_acceptance_lines: list[str] = []


@pytest.fixture(scope="session")
def acceptance_report():
    """Collector for acceptance-criterion verdict lines.

    Each criterion test calls this with its single PASS/FAIL line; the lines
    are echoed in a dedicated section of the terminal summary so the verdicts
    stay visible regardless of output capturing.
    """

    def record(line: str) -> None:
        _acceptance_lines.append(line)

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in _acceptance_lines:
            terminalreporter.write_line(line)

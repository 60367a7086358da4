"""Shared test plumbing: collect acceptance verdict lines for the summary."""

_criterion_lines: list[str] = []


def record_criterion(line: str) -> None:
    """Stash one measured-values line; printed after the test run ends."""
    _criterion_lines.append(line)


def pytest_terminal_summary(terminalreporter):
    if _criterion_lines:
        terminalreporter.section("acceptance criteria")
        for line in _criterion_lines:
            terminalreporter.write_line(line)

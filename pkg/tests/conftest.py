import pytest

VERDICTS: list[str] = []


@pytest.fixture
def verdict():
    """Record a criterion verdict line for the terminal summary."""
    return VERDICTS.append


def pytest_terminal_summary(terminalreporter):
    if VERDICTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(VERDICTS):
            terminalreporter.write_line(line)

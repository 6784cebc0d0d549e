import pytest

VERDICTS: list[str] = []


@pytest.fixture
def verdict():
    """Record a one-line verdict; shown again in the terminal summary."""

    def record(line: str):
        VERDICTS.append(line)
        print(line)

    return record


def pytest_terminal_summary(terminalreporter):
    if VERDICTS:
        terminalreporter.section("acceptance criteria")
        for line in VERDICTS:
            terminalreporter.write_line(line)

import pytest

from nimscore.solver import SolveCache

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def cache():
    """One solver cache shared by the whole run; entries are immutable."""
    return SolveCache()


@pytest.fixture(scope="session")
def acceptance_log():
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

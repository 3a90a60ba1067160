import pytest

from winnowcover import SetSystem

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def toy():
    """Two unit sets that both hold the single presented element."""
    return SetSystem.from_lists([[0], [0]]), (0,)


@pytest.fixture
def record():
    def _record(label, passed, detail):
        line = f"{'PASS' if passed else 'FAIL'}  {label}: {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return passed
    return _record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

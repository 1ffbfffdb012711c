import pytest

_verdicts = {}


@pytest.fixture
def verdict():
    """Record one PASS/FAIL line for an acceptance criterion and assert on it."""

    def record(number, ok, detail):
        line = f"acceptance criterion {number}: {'PASS' if ok else 'FAIL'} ({detail})"
        print(line)
        _verdicts[number] = line
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter):
    if _verdicts:
        terminalreporter.section("acceptance criteria")
        for number in sorted(_verdicts):
            terminalreporter.write_line(_verdicts[number])

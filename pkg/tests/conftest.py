import pytest

_lines = []


@pytest.fixture
def criterion(capsys):
    """Report one acceptance criterion: ``criterion(n, ok, detail)`` prints a PASS/FAIL line."""

    def report(number, ok, detail):
        line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
        _lines.append(line)
        with capsys.disabled():
            print(f"\n{line}")
        assert ok, line

    return report


def pytest_terminal_summary(terminalreporter):
    if _lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_lines, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)

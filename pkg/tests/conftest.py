import pytest

_CRITERIA = []


@pytest.fixture
def criterion():
    """Record an acceptance criterion verdict; the summary prints one line per criterion."""

    def record(name, ok, detail=""):
        _CRITERIA.append((name, bool(ok), detail))
        assert ok, f"{name}: {detail}"

    return record


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in _CRITERIA:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}  {detail}")

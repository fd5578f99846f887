import pytest

ACCEPTANCE = {}


@pytest.fixture
def record():
    """Store one summary line per acceptance criterion."""
    def _record(number, title, ok, detail):
        ACCEPTANCE[number] = f"[{'PASS' if ok else 'FAIL'}] {number:>2}. {title}: {detail}"
        print(ACCEPTANCE[number])
        return ok
    return _record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[number])

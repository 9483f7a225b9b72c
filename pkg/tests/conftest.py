import pytest

ACCEPTANCE = {}


@pytest.fixture
def record():
    """Record the outcome of one acceptance criterion: record(number, ok, detail)."""
    def _record(number, ok, detail=""):
        ACCEPTANCE[number] = (bool(ok), detail)
        return ok
    return _record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria (exact, zero tolerance)")
    for number in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}")

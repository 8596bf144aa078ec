import pytest

# criterion id -> (passed, detail), filled by test_acceptance
ACCEPTANCE: dict[str, tuple[bool, str]] = {}


@pytest.fixture
def record():
    def _record(criterion: str, passed: bool, detail: str = "") -> bool:
        ACCEPTANCE[criterion] = (bool(passed), detail)
        return bool(passed)
    return _record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE):
        passed, detail = ACCEPTANCE[key]
        terminalreporter.write_line(f"criterion {key}: {'PASS' if passed else 'FAIL'}  {detail}")

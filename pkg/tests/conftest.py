import pytest

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def acceptance_record():
    def record(number: int, title: str, ok: bool, detail: str = "", seconds: float = 0.0) -> None:
        line = f"criterion {number:2d} {'PASS' if ok else 'FAIL'} ({seconds:.1f}s) {title}"
        if detail:
            line += f": {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)

import pytest

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def acceptance():
    """Record one PASS/FAIL summary line per acceptance criterion."""

    def record(label, ok: bool, detail: str) -> bool:
        ACCEPTANCE_LINES.append(f"criterion {label}: {'PASS' if ok else 'FAIL'}  {detail}")
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=_order):
            terminalreporter.write_line(line)


def _order(line: str) -> int:
    label = line.split()[1].rstrip(":")
    return int(label) if label.isdigit() else 99

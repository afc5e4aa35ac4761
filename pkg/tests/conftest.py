import pytest

from nonprojdp.transitions import DepTree

# tokens 1..4 with arcs (3,1) and (4,2) crossing
CROSSING = DepTree((3, 4, 0, 3))

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def crossing():
    return CROSSING


@pytest.fixture
def acceptance():
    """Record one summary line per acceptance criterion."""

    def record(criterion: str, ok: bool | None, detail: str = "") -> None:
        status = "SKIP" if ok is None else "PASS" if ok else "FAIL"
        ACCEPTANCE_LINES.append(f"[{status}] {criterion}: {detail}")

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

import pytest

from twistor_lab import ren_wang_twistor as rw

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def heisenberg():
    return rw.heisenberg_structure()


@pytest.fixture(scope="session")
def real_slice():
    return rw.real_slice()


@pytest.fixture(scope="session")
def real_curvature(real_slice):
    return real_slice.geometry.curvature


@pytest.fixture
def acceptance():
    """Record one summary line per acceptance criterion; printed at the end of the run."""

    def record(number: int, title: str, passed: bool, detail: str = "") -> None:
        status = "PASS" if passed else "FAIL"
        line = f"criterion {number:2d} {status}: {title}"
        if detail:
            line += f" ({detail})"
        ACCEPTANCE_LINES.append((number, line))
        print(line)

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(line)

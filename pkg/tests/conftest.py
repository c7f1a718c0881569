import pytest

from mompoly.core import FamilySpec, Group

ACCEPTANCE_LINES: list[str] = []


def small_specs(max_kq: int = 2):
    """All (group, k, q) with kq <= max_kq."""
    out = []
    for g in (Group.U, Group.SP):
        for k in range(1, max_kq + 1):
            for q in range(1, max_kq // k + 1):
                out.append(FamilySpec(g, k, q))
    return out


@pytest.fixture
def record_criterion():
    def record(number: int, title: str, passed: bool, note: str = ""):
        line = f"criterion {number:>2}: {'PASS' if passed else 'FAIL'}  {title}"
        if note:
            line += f"  ({note})"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

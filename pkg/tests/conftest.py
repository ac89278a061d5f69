import pytest

from derangement_classes.exact import partition_table

# (criterion, passed, detail) recorded by test_acceptance.py
ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def table():
    return partition_table(10000)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in ACCEPTANCE_LINES:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")

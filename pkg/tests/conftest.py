import pathlib

import pytest

from rankmax.instance import parse_instance

DATA = pathlib.Path(__file__).resolve().parent.parent / "data"
EXAMPLE_TEXT = (DATA / "example.txt").read_text(encoding="utf-8")

# filled by tests/test_acceptance.py, printed after the run
ACCEPTANCE: list[tuple[str, bool, str]] = []


@pytest.fixture
def example():
    return parse_instance(EXAMPLE_TEXT)


@pytest.fixture
def example_path():
    return str(DATA / "example.txt")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, passed, detail in ACCEPTANCE:
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  {name}: {detail}")

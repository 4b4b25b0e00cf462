from pathlib import Path

import pytest

from sciontree import Image
from sciontree.io import parse_instance

FIXTURES = Path(__file__).parent / "fixtures"


def images(*points):
    return [Image(p) for p in points]


@pytest.fixture
def ex21():
    return parse_instance(FIXTURES / "ex21.set")


@pytest.fixture
def ex43():
    return parse_instance(FIXTURES / "ex43.set")


@pytest.fixture
def ex54():
    return parse_instance(FIXTURES / "ex54.set")


@pytest.fixture
def finding_vc():
    return parse_instance(FIXTURES / "finding_vc.set")


# criterion number -> (verdict, detail), filled by test_acceptance.py
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        verdict, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n:2d}: {verdict}  {detail}")

import os
import sys

import pytest
from hypothesis import settings

sys.path.insert(0, os.path.dirname(__file__))

from cyclam import parse_regular_system  # noqa: E402

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

FIXTURES = os.path.join(os.path.dirname(__file__), "fixtures")

T_SYSTEM = "T() = \\x. \\y. T() y x ;\nstart T()\n"
U_SYSTEM = "R(x) = \\y. R(y) x ;\nstart \\x. R(x)\n"

ACCEPTANCE_LINES: list = []


@pytest.fixture
def T():
    return parse_regular_system(T_SYSTEM)


@pytest.fixture
def U():
    return parse_regular_system(U_SYSTEM)


@pytest.fixture
def fixture_path():
    return lambda name: os.path.join(FIXTURES, name)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)

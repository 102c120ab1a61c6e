import os

import pytest

from bruhatgauge import sampling

ACCEPTANCE_LINES = []


@pytest.fixture
def rng():
    return sampling.make_rng(int(os.environ.get("BRUHAT_SEED", "20240611")))


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

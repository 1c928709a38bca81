import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

import util  # noqa: E402
from acceptance_log import RESULTS  # noqa: E402


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(RESULTS):
            terminalreporter.write_line(line)


@pytest.fixture
def bowtie():
    return util.bowtie()


@pytest.fixture
def bowtie_plus():
    return util.bowtie_plus()


@pytest.fixture
def k4():
    return util.k4()


@pytest.fixture
def k5():
    return util.k5()


@pytest.fixture
def c5():
    return util.c5()


@pytest.fixture
def triangle():
    return util.triangle()


@pytest.fixture(scope="session")
def corpus():
    return util.acceptance_corpus()

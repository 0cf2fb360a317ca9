import numpy as np
import pytest

from ddlab import WeightSequence


@pytest.fixture(scope="session")
def w15():
    return WeightSequence.factorial_power(1.5)


@pytest.fixture(scope="session")
def w2():
    return WeightSequence.factorial_power(2.0)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance")
        for number in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[number])

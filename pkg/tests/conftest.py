import numpy as np
import pytest

from hpfrontier.simgen import SimulationModel, generate_sample, make_rng

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def paper_sample():
    """n=500 draw from the test model with gamma=1."""
    return generate_sample(SimulationModel(1.0), 500, make_rng(7))

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from minkbm import body as bd
from minkbm.harness import generators as gen

settings.register_profile(
    "default", max_examples=25, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def grid():
    return bd.default_grid()


@pytest.fixture(scope="session")
def unit_cube():
    return gen.cube(1.0)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from cehom.module import cyclic_module, free_module
from cehom.ring import F2_X2, F2_XY, F3_X2, Z4, make_ring

settings.register_profile("default", deadline=None, max_examples=25, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

# filled in by test_acceptance; printed at the end of the session
ACCEPTANCE_LINES: dict = {}


@pytest.fixture(scope="session")
def z4():
    return make_ring(Z4)


@pytest.fixture(scope="session")
def f2x():
    return make_ring(F2_X2)


@pytest.fixture(scope="session")
def f3x():
    return make_ring(F3_X2)


@pytest.fixture(scope="session")
def f2xy():
    return make_ring(F2_XY)


@pytest.fixture(scope="session")
def dual(f2x):
    """R = F_2[x]/(x^2) with x, R and the residue field k."""
    x = f2x.elem([0, 1])
    return f2x, x, free_module(f2x, 1), cyclic_module(f2x, x)


def rng_for(*key):
    return np.random.default_rng(list(key))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])

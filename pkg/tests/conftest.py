import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from zakpol.core import ZakParams, reference_grid

settings.register_profile("default", deadline=None, max_examples=50, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture(scope="session")
def grid():
    return reference_grid()


@pytest.fixture(scope="session")
def small():
    # 3 x 5 grid with unit periods; every exhaustive oracle runs here
    return ZakParams(3, 5, 1.0, 1.0)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_frame(rng, L, unit=True):
    x = rng.standard_normal(L) + 1j * rng.standard_normal(L)
    return x / np.linalg.norm(x) if unit else x


#: (criterion number, passed, detail) lines collected by tests/test_acceptance.py
ACCEPTANCE: list[tuple[int, bool, str]] = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n, ok, detail in sorted(ACCEPTANCE):
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")

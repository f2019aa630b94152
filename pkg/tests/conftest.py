import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from superrad.collective import CouplingConfig

settings.register_profile(
    "default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


def pytest_addoption(parser):
    parser.addoption("--skip-slow", action="store_true", help="skip tests marked slow")


def pytest_collection_modifyitems(config, items):
    if not config.getoption("--skip-slow"):
        return
    skip = pytest.mark.skip(reason="--skip-slow given")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


@pytest.fixture
def rng():
    return np.random.default_rng(7)


@pytest.fixture
def uniform2():
    return CouplingConfig.uniform(2)


@pytest.fixture
def uniform5():
    return CouplingConfig.uniform(5)

import pytest
from hypothesis import HealthCheck, settings

from cpoisson import parse

settings.register_profile(
    "default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@pytest.fixture
def P1():
    """Parse on a one-dimensional chart."""
    return lambda s: parse(s, 1)


@pytest.fixture
def P2():
    return lambda s: parse(s, 2)

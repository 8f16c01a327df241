import math

import pytest
from hypothesis import HealthCheck, settings

from minsing.fixtures import pentagon_bundle, triangle_bundle, nakayama, nakayama_symmetric

settings.register_profile(
    "default", deadline=None, max_examples=40, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

SQRT2 = math.sqrt(2.0)
SQRT6 = math.sqrt(6.0)


@pytest.fixture(scope="session")
def nak():
    return nakayama(2)


@pytest.fixture(scope="session")
def nak_sym():
    return nakayama_symmetric(2)


@pytest.fixture(scope="session")
def pentagon():
    return pentagon_bundle(1, 2)


@pytest.fixture(scope="session")
def triangle():
    return triangle_bundle()

import math

import pytest
from hypothesis import settings

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")

ZETA2 = math.pi**2 / 6


@pytest.fixture
def zeta2():
    return ZETA2

import random

import pytest
from hypothesis import settings

# wall-clock deadlines make property tests flaky on loaded machines
settings.register_profile("default", deadline=None)
settings.load_profile("default")


@pytest.fixture
def rng():
    return random.Random(20240611)

import os
import random

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("exact", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("exact")

SEED = int(os.environ.get("PASTAT_SEED", "20240601"))


@pytest.fixture
def rng():
    return random.Random(SEED)

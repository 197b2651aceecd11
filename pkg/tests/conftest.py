import sys
from pathlib import Path

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile(
    "default", max_examples=60, deadline=None,
    suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

DIM_PAIRS = [(2, 2), (2, 3), (3, 2), (3, 3), (2, 4)]


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)

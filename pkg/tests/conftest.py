import os
import sys

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from gmrelax import kernels

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile("default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture(params=kernels.available_backends())
def backend(request):
    """Run the test once per kernel backend, restoring the default afterwards."""
    saved = kernels._active
    kernels._active = kernels.get_backend(request.param)
    yield request.param
    kernels._active = saved


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)

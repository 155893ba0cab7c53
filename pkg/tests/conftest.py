import os

import pytest
from hypothesis import HealthCheck, settings

from papc import _accel

settings.register_profile(
    "ci", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow], derandomize=True
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "ci"))

BACKENDS = ["numba", "numpy"] if _accel.HAVE_NUMBA else ["numpy"]


@pytest.fixture(params=BACKENDS)
def backend(request):
    before = _accel.backend()
    _accel.set_backend(request.param)
    yield request.param
    _accel.set_backend(before)

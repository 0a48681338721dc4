from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from cubench import psh
from cubench.cube import Variant

settings.register_profile(
    "cubench",
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("cubench")

SAMPLES = Path(__file__).resolve().parent.parent / "samples"


@pytest.fixture(params=list(Variant), ids=lambda v: v.value)
def variant(request):
    return request.param


@pytest.fixture
def interval2():
    return psh.interval(2)


@pytest.fixture
def terminal3():
    return psh.terminal(3)


@pytest.fixture
def samples_dir():
    return SAMPLES

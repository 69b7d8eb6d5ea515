import numpy as np
import pytest

from rghyper import _backend


@pytest.fixture(params=_backend.available())
def backend(request):
    old = _backend.use(request.param)
    yield request.param
    _backend.use(old)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)

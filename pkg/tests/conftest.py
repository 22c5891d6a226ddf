import numpy as np
import pytest

from hashedpf import kernels


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(params=sorted(kernels.available_backends()))
def backend(request):
    return kernels.available_backends()[request.param]

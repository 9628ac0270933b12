"""
Shared fixtures
"""

import pytest

from config.settings import reset_settings
from dist import DistributionSpec


@pytest.fixture(autouse=True)
def clean_settings(monkeypatch):
    """Every test starts from default settings"""
    for name in ("KMTLAB_SEED", "WORKERS", "DEFAULT_CONSTANT", "BERNSTEIN_Q_MAX", "LOG_LEVEL"):
        monkeypatch.delenv(name, raising=False)
    reset_settings()
    yield
    reset_settings()


@pytest.fixture
def rademacher():
    return DistributionSpec.rademacher()


@pytest.fixture
def gaussian():
    return DistributionSpec.gaussian(1.0)


@pytest.fixture
def uniform2():
    return DistributionSpec.uniform(2.0)


@pytest.fixture
def light_specs():
    return [
        DistributionSpec.rademacher(),
        DistributionSpec.uniform(1.0),
        DistributionSpec.uniform(3.0),
        DistributionSpec.gaussian(0.5),
        DistributionSpec.gaussian(2.0),
        DistributionSpec.laplace(1.0),
        DistributionSpec.two_point(0.2, 1.0),
        DistributionSpec.two_point(0.7, 3.0),
    ]


@pytest.fixture
def geometric_weights():
    """u_k = 2^{-k}: blocks are singletons and n_m = m"""
    return [2.0 ** (-k) for k in range(1, 41)]

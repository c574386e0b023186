import numpy as np
import pytest
from hypothesis import HealthCheck, settings

import oracles
from affinv.corpus import corpus

settings.register_profile("default", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture(scope="session", autouse=True)
def corpus_self_check():
    """Fixture metadata must agree with the exhaustive symmetry oracle."""
    for fx in corpus():
        found = len(oracles.brute_force_symmetries(fx.body))
        assert found == fx.order, f"{fx.name}: oracle finds {found} symmetries, fixture says {fx.order}"


@pytest.fixture
def rng():
    return np.random.default_rng(1234)

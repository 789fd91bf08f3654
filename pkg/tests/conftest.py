import numpy as np
import pytest

from markov_claims.model import ModelParams


@pytest.fixture
def params():
    return ModelParams(0.5, 0.1, 0.02, 3)


@pytest.fixture
def params_d1():
    return ModelParams(0.5, 0.1, 0.02, 1)


@pytest.fixture
def rng():
    return np.random.default_rng(20260811)


def random_valid_params(rng, d_max=5):
    """Uniform draw from the interior of the admissible box."""
    return ModelParams(alpha=float(rng.uniform(0.05, 0.81)),
                       beta=float(rng.uniform(0.005, 0.15)),
                       gamma=float(rng.uniform(0.002, 0.05)),
                       d=int(rng.integers(1, d_max + 1)))

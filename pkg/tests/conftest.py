import numpy as np
import pytest

from domain.models import CoefficientTree, FunctionSpec, SeedSpec
from sequence.model import simulate
from wavelet.functions import true_coefficients

N_SMALL = 2**10
SIGMA = 0.1


@pytest.fixture
def rng():
    return np.random.default_rng(20130101)


@pytest.fixture
def sine_spec():
    return FunctionSpec()


@pytest.fixture
def sine_truth(sine_spec):
    return true_coefficients(sine_spec, 10)


@pytest.fixture
def sine_obs(sine_truth):
    """One noisy draw of the sine at n = 2^10, sigma = 0.1."""
    return simulate(sine_truth, N_SMALL, SIGMA, SeedSpec(master_seed=7, repetition_index=0))


@pytest.fixture
def random_tree(rng):
    def make(max_level: int) -> CoefficientTree:
        return CoefficientTree(levels=[rng.standard_normal(1)] + [rng.standard_normal(2**j) for j in range(max_level + 1)])

    return make

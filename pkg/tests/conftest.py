import numpy as np
import pytest

from rabisim import QuantumNumbers, make_level_pair


@pytest.fixture(scope="session")
def pair_1s2p():
    return make_level_pair(QuantumNumbers(1, 0), QuantumNumbers(2, 1))


@pytest.fixture(scope="session")
def pair_1s9p():
    return make_level_pair(QuantumNumbers(1, 0), QuantumNumbers(9, 1))


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)

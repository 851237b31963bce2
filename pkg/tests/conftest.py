import numpy as np
import pytest

from qhide import StateLabel, family_states

LABELS = list(StateLabel)


@pytest.fixture(scope="session")
def family4():
    return family_states(4)


@pytest.fixture(scope="session")
def family6():
    return family_states(6)


@pytest.fixture(scope="session")
def family8():
    return family_states(8)


def random_density(dim: int, rng: np.random.Generator) -> np.ndarray:
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    rho = g @ g.conj().T
    return rho / np.trace(rho)

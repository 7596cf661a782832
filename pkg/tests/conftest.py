import numpy as np
import pytest
from hypothesis import strategies as st

from bdsest.states import BellDiagonalState


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_density_matrix(rng, rank=4):
    g = rng.standard_normal((4, rank)) + 1j * rng.standard_normal((4, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_state(rng) -> BellDiagonalState:
    return BellDiagonalState(rng.dirichlet(np.ones(4)))


@st.composite
def thetas(draw):
    raw = draw(st.lists(st.floats(0.0, 1.0, allow_nan=False), min_size=4, max_size=4))
    raw = np.asarray(raw) + 1e-6
    return raw / raw.sum()

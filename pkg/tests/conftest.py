import numpy as np
import pytest

from qsk import Frame, TwoQubitState, completeness_rank

_FAMILY_VERTICES = np.array(
    [[-1, 1, 1], [1, -1, 1], [1, 1, -1], [-1, -1, -1]], dtype=float
)


def random_density(rng, dim):
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_state(rng, dim):
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)


def random_ic_frame(rng, dim):
    """Random informationally complete frame of dim^2 states."""
    while True:
        states = [random_state(rng, dim) for _ in range(dim * dim)]
        frame = Frame(dim=dim, states=states, labels=[f"s{i}" for i in range(dim * dim)])
        if completeness_rank(frame) == dim * dim:
            return frame


def random_physical_two_qubit(rng):
    """Uniformly mixed corner states of the two-qubit family (always physical)."""
    weights = rng.dirichlet(np.ones(4))
    coeffs = weights @ _FAMILY_VERTICES
    return TwoQubitState(rho_x=coeffs[0], rho_y=coeffs[1], rho_z=coeffs[2])


@pytest.fixture
def rng():
    return np.random.default_rng(20240815)

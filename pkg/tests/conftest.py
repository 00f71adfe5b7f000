import numpy as np
import pytest

from spinorent.clifford import build_rep

S0 = np.eye(2, dtype=complex)
S1 = np.array([[0, 1], [1, 0]], dtype=complex)
S2 = np.array([[0, -1j], [1j, 0]], dtype=complex)
S3 = np.array([[1, 0], [0, -1]], dtype=complex)


@pytest.fixture(scope="session")
def rep_a():
    return build_rep("A")


@pytest.fixture(scope="session")
def rep_b():
    return build_rep("B")


@pytest.fixture(scope="session", params=["A", "B"])
def rep(request):
    return build_rep(request.param)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_matrix(rng, n=2, scale=1.0):
    return scale * (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)))


def random_vector(rng, n=4):
    return rng.standard_normal(n) + 1j * rng.standard_normal(n)

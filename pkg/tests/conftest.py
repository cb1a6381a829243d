import numpy as np
import pytest

from qjsd.states import StateSampler, haar_unitary, projective_povm, simplex_point


def rand_hermitian(rng, n):
    z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return (z + z.conj().T) / 2.0


def rand_pure(rng, n):
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return v / np.linalg.norm(v)


def rand_density(rng, n):
    u = haar_unitary(rng, n)
    lam = simplex_point(rng, n)
    return (u * lam) @ u.conj().T


def commuting_pair(rng, n):
    """Two states diagonal in one random basis."""
    u = haar_unitary(rng, n)
    lam = simplex_point(rng, n)
    mu = simplex_point(rng, n)
    return (u * lam) @ u.conj().T, (u * mu) @ u.conj().T, u, lam, mu


def random_povm(rng, n):
    """Projective, smoothed, or coarse-grained random POVM."""
    elements = projective_povm(haar_unitary(rng, n))
    kind = rng.integers(3)
    if kind == 1:
        alpha = float(rng.uniform(0.1, 1.0))
        eye = np.eye(n)
        elements = [(e + alpha * eye / n) / (1.0 + alpha) for e in elements]
    elif kind == 2 and n > 2:
        elements = [elements[0] + elements[1]] + elements[2:]
    return elements


@pytest.fixture
def rng():
    return np.random.default_rng(2024)

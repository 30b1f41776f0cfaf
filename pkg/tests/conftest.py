import numpy as np
import pytest


def random_unitary(rng, dim):
    """Haar-ish unitary via QR of a complex Gaussian with phase fixing."""
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(g)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_antihermitian(rng, dim, scale=1.0):
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return scale * (g - g.conj().T) / 2.0


def random_skew(rng, dim, scale=1.0):
    g = rng.normal(size=(dim, dim))
    return scale * (g - g.T) / 2.0


@pytest.fixture
def rng():
    return np.random.default_rng(20260810)

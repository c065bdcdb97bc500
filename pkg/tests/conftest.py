import os

import numpy as np
import pytest

from osrkit import MatrixTuple, outer_spectral_radius

DATA_DIR = os.path.join(os.path.dirname(__file__), "data")


def random_matrix(rng, n, real=False):
    if real:
        return rng.standard_normal((n, n))
    return (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)


def random_tuple(rng, n, d, real=False) -> MatrixTuple:
    return MatrixTuple(tuple(random_matrix(rng, n, real) for _ in range(d)))


def scaled_to_osr(x: MatrixTuple, target: float) -> MatrixTuple:
    """Rescale so the outer spectral radius equals ``target`` (generic x)."""
    rho_hat = outer_spectral_radius(x)
    assert rho_hat > 0, "cannot rescale a nilpotent tuple"
    return x.scaled(target / rho_hat)


def random_trace_preserving(rng, n, d) -> MatrixTuple:
    """Random quantum channel: the n x n blocks of a Haar-ish (n d) x n isometry
    satisfy sum X_i^* X_i = I."""
    g = rng.standard_normal((n * d, n)) + 1j * rng.standard_normal((n * d, n))
    q, _ = np.linalg.qr(g)
    return MatrixTuple(tuple(q[i * n:(i + 1) * n, :] for i in range(d)))


def random_psd(rng, n):
    g = random_matrix(rng, n)
    return g @ g.conj().T


@pytest.fixture
def data_dir():
    return DATA_DIR


# frequently used constants
E11 = np.array([[1.0, 0.0], [0.0, 0.0]], dtype=complex)
E12 = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
E21 = np.array([[0.0, 0.0], [1.0, 0.0]], dtype=complex)
E22 = np.array([[0.0, 0.0], [0.0, 1.0]], dtype=complex)
SX = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SY = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SZ = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)


def shift_pair() -> MatrixTuple:
    return MatrixTuple((2 * E12, 2 * E21))


def amplitude_damping(p=0.5) -> MatrixTuple:
    return MatrixTuple((np.diag([1.0, np.sqrt(1 - p)]).astype(complex),
                        np.sqrt(p) * E12))

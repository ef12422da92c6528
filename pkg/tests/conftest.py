import numpy as np
import pytest


def kron_entrywise(a, b):
    """Independent Kronecker product oracle: explicit entry loops."""
    m, n = a.shape
    p, q = b.shape
    out = np.zeros((m * p, n * q), dtype=complex)
    for i in range(m):
        for j in range(n):
            for k in range(p):
                for l in range(q):
                    out[i * p + k, j * q + l] = a[i, j] * b[k, l]
    return out


def random_complex(rng, shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def random_integer_triple(rng, n, low=-5, high=6):
    """Random integer m-by-n triple with m = n + 1."""
    m = n + 1
    return tuple(
        rng.integers(low, high, size=(m, n)).astype(complex) for _ in range(3)
    )


def planted_problem(rng, m, n, lam, x):
    """Random triple with (lam, x) planted as an exact solution.

    A2 is corrected so that lam[0]*A0 + lam[1]*A1 + lam[2]*A2 annihilates x;
    lam[2] must be nonzero.
    """
    lam = np.asarray(lam, dtype=complex)
    x = np.asarray(x, dtype=complex)
    assert abs(lam[2]) > 0
    a0 = random_complex(rng, (m, n))
    a1 = random_complex(rng, (m, n))
    a2 = random_complex(rng, (m, n))
    defect = (lam[0] * a0 + lam[1] * a1 + lam[2] * a2) @ x
    a2 = a2 - np.outer(defect, x.conj()) / (lam[2] * np.vdot(x, x))
    return a0, a1, a2


def planted_pair(rng, m, n, nu, x):
    """Random (A, B) with (nu[0]*A + nu[1]*B) x = 0 planted; nu[1] != 0."""
    nu = np.asarray(nu, dtype=complex)
    x = np.asarray(x, dtype=complex)
    assert abs(nu[1]) > 0
    a = random_complex(rng, (m, n))
    b = random_complex(rng, (m, n))
    defect = (nu[0] * a + nu[1] * b) @ x
    b = b - np.outer(defect, x.conj()) / (nu[1] * np.vdot(x, x))
    return a, b


@pytest.fixture
def ex1_matrices():
    return (
        np.array([[2, 3, 1], [2, 2, 2], [4, 4, 3], [5, 5, 4]], dtype=complex),
        np.array([[3, 3, 1], [1, 2, 2], [2, 3, 3], [4, 2, 4]], dtype=complex),
        np.array([[3, 1, 2], [3, 3, 3], [3, 4, 4], [4, 4, 5]], dtype=complex),
    )


@pytest.fixture
def ex2_matrices():
    return (
        np.array([[1, 0], [4, 0], [7, 0]], dtype=complex),
        np.array([[2, 0], [5, 0], [8, 0]], dtype=complex),
        np.array([[3, 0], [0, 6], [9, 0]], dtype=complex),
    )


@pytest.fixture
def ex3_matrices():
    return (
        np.array([[2, 4], [6, 0], [0, 2], [6, 0]], dtype=complex),
        np.array([[1, 0], [0, 1], [0, 0], [0, 0]], dtype=complex),
        np.array([[0, 0], [2, 0], [0, 2], [2, 0]], dtype=complex),
    )

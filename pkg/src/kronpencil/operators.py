"""Kronecker commutators, their block structure, and the deflated determinants.

The commutator of a pair (A, B) is A kron B - B kron A; the anti-commutator
uses the + sign.  The orthogonal transform of :mod:`.structure` block
anti-diagonalizes every commutator and block diagonalizes every
anti-commutator.  The bottom-left commutator block, assembled directly in
compressed form, is the deflated determinant used by the solver.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .structure import orthogonal_transform, scaled_compressors


def kron_commutator(a, b):
    """A kron B - B kron A for same-shape matrices."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    return np.kron(a, b) - np.kron(b, a)


def kron_anticommutator(a, b):
    """A kron B + B kron A for same-shape matrices."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    return np.kron(a, b) + np.kron(b, a)


def pencil_commutators(problem):
    """The three cyclic commutators (A1, A2), (A2, A0), (A0, A1)."""
    a0, a1, a2 = problem.matrices
    return (
        kron_commutator(a1, a2),
        kron_commutator(a2, a0),
        kron_commutator(a0, a1),
    )


def _square_sides(shape):
    m2, n2 = shape
    m, n = math.isqrt(m2), math.isqrt(n2)
    if m * m != m2 or n * n != n2:
        raise ValueError(f"dimensions {shape} are not perfect squares")
    return m, n


def block_antidiagonalize(delta):
    """Off-diagonal blocks of T_m @ delta @ T_n.T for a commutator delta.

    Returns (top_right, bottom_left) with shapes
    m(m+1)/2 x n(n-1)/2 and m(m-1)/2 x n(n+1)/2; the diagonal blocks of the
    transformed commutator vanish to rounding.
    """
    delta = np.asarray(delta, dtype=complex)
    m, n = _square_sides(delta.shape)
    _, vm, um = orthogonal_transform(m)
    _, vn, un = orthogonal_transform(n)
    top_right = vm @ delta @ un.T.toarray()
    bottom_left = um @ delta @ vn.T.toarray()
    return top_right, bottom_left


def block_diagonalize_anti(delta_anti):
    """Diagonal blocks of T_m @ delta_anti @ T_n.T for an anti-commutator."""
    delta_anti = np.asarray(delta_anti, dtype=complex)
    m, n = _square_sides(delta_anti.shape)
    _, vm, um = orthogonal_transform(m)
    _, vn, un = orthogonal_transform(n)
    top_left = vm @ delta_anti @ vn.T.toarray()
    bottom_right = um @ delta_anti @ un.T.toarray()
    return top_left, bottom_right


@dataclass
class DeterminantTriple:
    """Deflated determinants of a pencil problem, each m(m-1)/2 x n(n+1)/2.

    ``scaling`` is "integer" (0/±1 compressors, exact on integer input) or
    "orthogonal" (rows of the orthogonal transform).  The two differ by a
    positive diagonal row scaling and a positive diagonal column scaling
    shared by all three matrices.
    """

    gamma0: np.ndarray
    gamma1: np.ndarray
    gamma2: np.ndarray
    scaling: str
    m: int
    n: int

    @property
    def gammas(self):
        return (self.gamma0, self.gamma1, self.gamma2)

    @property
    def square(self):
        return self.gamma0.shape[0] == self.gamma0.shape[1]

    def combine(self, alpha):
        alpha = np.asarray(alpha, dtype=complex)
        return alpha[0] * self.gamma0 + alpha[1] * self.gamma1 + alpha[2] * self.gamma2

    def pair_pencil(self, i, j, lam_i, lam_j):
        """Member lam_i * Gamma_j - lam_j * Gamma_i of the (i, j) pencil."""
        return lam_i * self.gammas[j] - lam_j * self.gammas[i]


def _to_orthogonal_scaling(g, n):
    # integer and orthogonal scalings differ by sqrt(2) on every row and by
    # an extra sqrt(2) on the strict-pair columns
    g = g / math.sqrt(2.0)
    g[:, n:] /= math.sqrt(2.0)
    return g


def kronecker_determinants(problem, scaling="integer"):
    """Assemble the three deflated determinants of a pencil problem.

    Entries are evaluated on demand from the cyclic pairs (A1, A2), (A2, A0),
    (A0, A1); the m^2-by-n^2 commutators are never materialized.
    """
    if scaling not in ("integer", "orthogonal"):
        raise ValueError(f"unknown scaling {scaling!r}")
    a0, a1, a2 = problem.matrices
    gammas = [
        kernels.pair_determinant(a1, a2),
        kernels.pair_determinant(a2, a0),
        kernels.pair_determinant(a0, a1),
    ]
    if scaling == "orthogonal":
        gammas = [_to_orthogonal_scaling(g, problem.n) for g in gammas]
    return DeterminantTriple(*gammas, scaling=scaling, m=problem.m, n=problem.n)


def deflated_lift(y, n):
    """Lift a deflated vector back to vec-space: z = V_hat.T @ y.

    Valid for null vectors obtained under either scaling; for the integer
    scaling this is exactly the symmetric reconstruction whose unvec has the
    y-coordinates on the diagonal and split across symmetric pairs.
    """
    v_hat, _ = scaled_compressors(n)
    y = np.asarray(y, dtype=complex)
    return v_hat.T @ y

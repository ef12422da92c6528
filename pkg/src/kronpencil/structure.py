"""Exact sparse structure matrices for column-stacked square matrices.

Everything here is combinatorial: the commutation matrix, the symmetric and
skew-symmetric projectors, the diagonal/strict-lower/strict-upper selection
matrices, and the orthogonal transform that splits vec-space into symmetric
and skew coordinates.  All constructors are pure functions of the dimension
and return immutable scipy CSR matrices built directly from index formulas
(never by composing dense permutations).

Index conventions: entry (i, j) of an n-by-n matrix Z sits at position
j*n + i of vec(Z) (0-based, column-major).  Strict pairs (i, j) with j < i
are enumerated column by column; ``StrictPairIndex`` is the 1-based boundary
for that enumeration.
"""

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp


@dataclass(frozen=True)
class StrictPairIndex:
    """1-based strict-lower pair (i, j), j < i <= n, and its linear index k.

    k enumerates the strict-lower entries of an n-by-n matrix column by
    column: k = (j-1)*n + i - j*(j+1)/2, a bijection onto 1..n(n-1)/2.
    """

    i: int
    j: int
    n: int

    def __post_init__(self):
        if not 1 <= self.j < self.i <= self.n:
            raise ValueError(f"need 1 <= j < i <= n, got i={self.i}, j={self.j}, n={self.n}")

    @property
    def k(self):
        return (self.j - 1) * self.n + self.i - self.j * (self.j + 1) // 2

    @classmethod
    def from_linear(cls, k, n):
        """Inverse of the (i, j) -> k map."""
        if not 1 <= k <= n * (n - 1) // 2:
            raise ValueError(f"linear index {k} out of range for n={n}")
        for j in range(1, n):
            block = n - j
            if k <= block:
                return cls(i=j + k, j=j, n=n)
            k -= block
        raise AssertionError("unreachable")


def strict_pair_count(n):
    return n * (n - 1) // 2


def strict_pairs(n):
    """0-based strict-lower pairs (i, j), j < i, in linear-index order."""
    return [(i, j) for j in range(n - 1) for i in range(j + 1, n)]


def _check_dim(n):
    if n < 1:
        raise ValueError(f"dimension must be >= 1, got {n}")


def vec(z):
    """Column-major stacking of a square matrix into a vector."""
    z = np.asarray(z)
    if z.ndim != 2 or z.shape[0] != z.shape[1]:
        raise ValueError(f"vec expects a square matrix, got shape {z.shape}")
    return z.reshape(-1, order="F").copy()


def unvec(v):
    """Inverse of ``vec``; the length must be a perfect square."""
    v = np.asarray(v)
    if v.ndim != 1:
        raise ValueError("unvec expects a vector")
    n = math.isqrt(v.size)
    if n * n != v.size:
        raise ValueError(f"length {v.size} is not a perfect square")
    return v.reshape(n, n, order="F").copy()


def commutation_matrix(n):
    """Permutation K with K @ vec(Z) = vec(Z.T); symmetric, K @ K = I."""
    _check_dim(n)
    cols = np.arange(n * n)
    i, j = cols % n, cols // n
    rows = i * n + j  # vec position of (j, i)
    data = np.ones(n * n)
    return sp.csr_matrix((data, (rows, cols)), shape=(n * n, n * n))


def projectors(n):
    """Symmetric and skew projectors (I + K)/2 and (I - K)/2 on vec-space."""
    _check_dim(n)
    k = commutation_matrix(n)
    eye = sp.identity(n * n, format="csr")
    sym = ((eye + k) * 0.5).tocsr()
    skew = ((eye - k) * 0.5).tocsr()
    # drop the explicitly stored zeros created by the subtraction
    skew.eliminate_zeros()
    sym.eliminate_zeros()
    return sym, skew


def selection_matrices(n):
    """0/1 selectors picking the diagonal, strict-lower and strict-upper
    entries out of vec(Z).

    Row k of the lower selector picks entry (i, j) of Z and row k of the
    upper selector picks the transposed entry (j, i), for the k-th strict
    pair.  Stacking the three yields a permutation of vec-space.
    """
    _check_dim(n)
    diag_cols = np.arange(n) * n + np.arange(n)
    s_d = sp.csr_matrix(
        (np.ones(n), (np.arange(n), diag_cols)), shape=(n, n * n)
    )
    pairs = strict_pairs(n)
    npair = len(pairs)
    low_cols = np.array([j * n + i for i, j in pairs], dtype=int)
    upp_cols = np.array([i * n + j for i, j in pairs], dtype=int)
    rows = np.arange(npair)
    ones = np.ones(npair)
    s_l = sp.csr_matrix((ones, (rows, low_cols)), shape=(npair, n * n))
    s_u = sp.csr_matrix((ones, (rows, upp_cols)), shape=(npair, n * n))
    return s_d, s_l, s_u


def orthogonal_transform(n):
    """Real orthogonal T = [V; U] splitting vec-space.

    V (n(n+1)/2 rows) carries the symmetric coordinates: the diagonal plus
    (lower+upper)/sqrt(2) sums.  U (n(n-1)/2 rows) carries the skew
    coordinates (lower-upper)/sqrt(2).  T @ T.T = T.T @ T = I up to the
    rounding of sqrt(2); for a symmetric z, U @ z = 0 and V.T @ V @ z = z.
    """
    _check_dim(n)
    s_d, s_l, s_u = selection_matrices(n)
    inv_sqrt2 = 1.0 / math.sqrt(2.0)
    v = sp.vstack([s_d, (s_l + s_u) * inv_sqrt2]).tocsr()
    u = ((s_l - s_u) * inv_sqrt2).tocsr()
    t = sp.vstack([v, u]).tocsr()
    return t, v, u


def scaled_compressors(n):
    """Integer-entry variants of V and U used for deflated assembly.

    Rescaling the rows of V by (1, ..., 1, sqrt(2), ..., sqrt(2)) and U by
    sqrt(2) clears every irrational entry: the result has entries in {0, 1}
    (symmetric side) and {0, +1, -1} (skew side), so integer inputs stay
    integer through the deflation.
    """
    _check_dim(n)
    s_d, s_l, s_u = selection_matrices(n)
    v_hat = sp.vstack([s_d, s_l + s_u]).tocsr()
    u_hat = (s_l - s_u).tocsr()
    return v_hat, u_hat

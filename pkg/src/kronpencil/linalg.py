"""Rank-revealing primitives, problem normalization, and symmetric rank-one
(decomposable-vector) factorization.

Rank decisions use a relative threshold on singular values.  Eigenvector and
eigenvalue representatives follow one sign convention: unit 2-norm with the
largest-modulus component real positive, ties broken by the smallest index.
"""

from dataclasses import dataclass

import numpy as np

from .problem import PencilProblem, UnsupportedShapeError
from .structure import unvec


def canonicalize(v):
    """Unit 2-norm representative of a nonzero vector with the largest-modulus
    component rotated real positive (the +/- tie goes to positive imaginary)."""
    v = np.asarray(v, dtype=complex)
    nrm = np.linalg.norm(v)
    if nrm == 0:
        raise ValueError("cannot canonicalize the zero vector")
    v = v / nrm
    k = int(np.argmax(np.abs(v)))
    pivot = v[k]
    if abs(pivot) > 0:
        v = v * (abs(pivot) / pivot)
    return v


def sign_align(v):
    """Flip v by -1 if needed so the largest-modulus entry has positive real
    part (positive imaginary part on a real-part tie).  Unlike
    :func:`canonicalize` this never rotates the phase, only picks a branch."""
    v = np.asarray(v, dtype=complex)
    k = int(np.argmax(np.abs(v)))
    re, im = v[k].real, v[k].imag
    if re < 0 or (re == 0 and im < 0):
        return -v
    return v.copy()


def projective_distance(u, v):
    """Sine of the angle between the complex lines spanned by u and v.

    Computed as the norm of the component of v orthogonal to u, which stays
    accurate down to rounding level for nearly parallel lines."""
    u = np.asarray(u, dtype=complex).ravel()
    v = np.asarray(v, dtype=complex).ravel()
    nu, nv = np.linalg.norm(u), np.linalg.norm(v)
    if nu == 0 or nv == 0:
        raise ValueError("projective distance needs nonzero vectors")
    u = u / nu
    v = v / nv
    w = v - u * np.vdot(u, v)
    return float(min(1.0, np.linalg.norm(w)))


def numerical_rank(mat, tol):
    """Count of singular values above tol times the largest one."""
    _check_tol(tol)
    mat = np.asarray(mat, dtype=complex)
    if mat.size == 0:
        return 0
    s = np.linalg.svd(mat, compute_uv=False)
    if s[0] == 0 or not np.isfinite(s[0]):
        return 0
    return int(np.count_nonzero(s > tol * s[0]))


def _check_tol(tol):
    if not 0.0 < tol < 1.0:
        raise ValueError(f"tolerance must lie in (0, 1), got {tol}")


@dataclass
class CompressionResult:
    """Unitary transform exposing a full-rank leading block.

    Row form: transform @ input = compressed with zero trailing rows.
    Column form: input @ transform = compressed with zero trailing columns.
    """

    transform: np.ndarray
    compressed: np.ndarray
    rank: int


def row_compression(mat, tol):
    """Unitary W with W @ mat = [R; 0], R of full row rank."""
    _check_tol(tol)
    mat = np.asarray(mat, dtype=complex)
    u, s, vh = np.linalg.svd(mat)
    r = int(np.count_nonzero(s > tol * s[0])) if s.size and s[0] > 0 else 0
    w = u.conj().T
    compressed = w @ mat
    compressed[r:, :] = 0.0
    return CompressionResult(transform=w, compressed=compressed, rank=r)


def column_compression(mat, tol):
    """Unitary V with mat @ V = [C 0], C of full column rank."""
    _check_tol(tol)
    mat = np.asarray(mat, dtype=complex)
    u, s, vh = np.linalg.svd(mat)
    r = int(np.count_nonzero(s > tol * s[0])) if s.size and s[0] > 0 else 0
    v = vh.conj().T
    compressed = mat @ v
    compressed[:, r:] = 0.0
    return CompressionResult(transform=v, compressed=compressed, rank=r)


def nullspace(mat, tol, scale=None):
    """Orthonormal basis of the right null space.

    The rank threshold is tol times the largest singular value, or tol times
    ``scale`` when given.  Passing the natural scale of the enclosing problem
    keeps the decision meaningful for matrices that are zero up to noise."""
    _check_tol(tol)
    mat = np.asarray(mat, dtype=complex)
    p, q = mat.shape
    if q == 0:
        return np.zeros((0, 0), dtype=complex)
    if p == 0 or not np.any(mat):
        return np.eye(q, dtype=complex)
    _, s, vh = np.linalg.svd(mat, full_matrices=True)
    thresh = tol * (s[0] if scale is None else scale)
    r = int(np.count_nonzero(s > thresh))
    return vh[r:, :].conj().T


def normalize_problem(a0, a1, a2, tol):
    """Reduce a matrix triple so the stacked matrix has full column rank and
    the concatenated matrix has full row rank.

    Returns (problem, right_map, left_map) where right_map lifts eigenvectors
    of the reduced problem back to the original coordinates
    (x_original = right_map @ x_reduced) and left_map records the row
    reduction.  Already-normalized input yields exact identity maps.
    Eigenvalues are unchanged by either map.
    """
    _check_tol(tol)
    mats = [np.asarray(a, dtype=complex) for a in (a0, a1, a2)]
    if not (mats[0].shape == mats[1].shape == mats[2].shape):
        raise ValueError("the three matrices must share one shape")
    m, n = mats[0].shape

    stacked = np.vstack(mats)
    r_col = numerical_rank(stacked, tol)
    if r_col < n:
        comp = column_compression(stacked, tol)
        right_map = comp.transform[:, :r_col]
        mats = [a @ right_map for a in mats]
        n = r_col
    else:
        right_map = np.eye(n, dtype=complex)

    concat = np.hstack(mats)
    r_row = numerical_rank(concat, tol)
    if r_row < m:
        comp = row_compression(concat, tol)
        left_map = comp.transform[:r_row, :]
        mats = [left_map @ a for a in mats]
        m = r_row
    else:
        left_map = np.eye(m, dtype=complex)

    if m <= n:
        raise UnsupportedShapeError(
            f"normalization leaves {m} rows and {n} columns; need more rows than columns"
        )
    problem = PencilProblem(*mats, normalized=True)
    return problem, right_map, left_map


def symmetric_rank_one_factor(z, tol):
    """Factor x with x kron x close to z, or None.

    The unvec of z is symmetrized (transpose, not conjugate) and tested for
    rank one by its second singular value; the factor is read off the
    dominant singular pair, which stays well defined even for isotropic x
    (x.T @ x = 0) where the dominant eigenpair degenerates.  The final check
    is against the raw z, so a large skew part also returns None.
    """
    _check_tol(tol)
    z = np.asarray(z, dtype=complex).ravel()
    znorm = np.linalg.norm(z)
    if znorm == 0:
        raise ValueError("input vector must be nonzero")
    mat = unvec(z)
    sym = 0.5 * (mat + mat.T)
    u, s, _ = np.linalg.svd(sym)
    if s[0] == 0:
        return None
    if s.size > 1 and s[1] > tol * s[0]:
        return None
    u1 = u[:, 0]
    # x = c*u1 with c^2 the coefficient of u1 u1.T in sym
    c2 = np.vdot(u1, sym @ u1.conj())
    x = np.sqrt(c2) * u1
    x = sign_align(x)
    if np.linalg.norm(np.kron(x, x) - z) > tol * znorm:
        return None
    return x


def _dominant_factor(z):
    """Dominant factor of the symmetrized unvec, without any rank-one check."""
    mat = unvec(z)
    sym = 0.5 * (mat + mat.T)
    u, s, _ = np.linalg.svd(sym)
    if s[0] == 0:
        return None
    u1 = u[:, 0]
    c2 = np.vdot(u1, sym @ u1.conj())
    return np.sqrt(c2) * u1


def _refine_factor(qbasis, x0, iters=25):
    """Gauss-Newton for x with x kron x inside the column span of qbasis.

    Residual r(x) = (I - Q Q^H)(x kron x) plus a fixed normalization row;
    everything is holomorphic in x, so complex least squares applies."""
    n = int(round(np.sqrt(qbasis.shape[0])))
    x = x0 / np.linalg.norm(x0)
    w = x.copy()
    eye = np.eye(n, dtype=complex)
    for _ in range(iters):
        xx = np.kron(x, x)
        res = xx - qbasis @ (qbasis.conj().T @ xx)
        jac = np.empty((n * n, n), dtype=complex)
        for k in range(n):
            col = np.kron(eye[:, k], x) + np.kron(x, eye[:, k])
            jac[:, k] = col
        jac = jac - qbasis @ (qbasis.conj().T @ jac)
        full_res = np.concatenate([res, [np.vdot(w, x) - 1.0]])
        full_jac = np.vstack([jac, w.conj()[None, :]])
        step, *_ = np.linalg.lstsq(full_jac, -full_res, rcond=None)
        x = x + step
        nx = np.linalg.norm(x)
        if not np.isfinite(nx) or nx == 0:
            return None
        if np.linalg.norm(full_res) <= 1e-15 * max(1.0, nx * nx):
            break
    return x


def _minor_root_candidates(basis):
    """Roots of the 2x2-minor quadratics of the symmetrized pencil Z1 + t*Z2
    (deterministic sweep, two-dimensional spans only)."""
    z1 = unvec(basis[:, 0])
    z2 = unvec(basis[:, 1])
    z1 = 0.5 * (z1 + z1.T)
    z2 = 0.5 * (z2 + z2.T)
    n = z1.shape[0]
    scale = max(np.abs(z1).max(), np.abs(z2).max(), 1e-300)
    cands = [np.array([1.0, 0.0]), np.array([0.0, 1.0]), np.array([1.0, 1.0])]
    for r1 in range(n - 1):
        for r2 in range(r1 + 1, n):
            for c1 in range(n - 1):
                for c2 in range(c1 + 1, n):
                    a1, b1 = z1[r1, c1], z2[r1, c1]
                    a2, b2 = z1[r2, c2], z2[r2, c2]
                    a3, b3 = z1[r1, c2], z2[r1, c2]
                    a4, b4 = z1[r2, c1], z2[r2, c1]
                    quad = np.array([
                        b1 * b2 - b3 * b4,
                        a1 * b2 + a2 * b1 - a3 * b4 - a4 * b3,
                        a1 * a2 - a3 * a4,
                    ])
                    if np.abs(quad).max() <= 1e-13 * scale**2:
                        continue
                    for t in np.roots(quad):
                        if np.isfinite(t):
                            cands.append(np.array([1.0, t]))
    return cands


def decomposable_candidates(basis, tol, *, seed=0, starts=24, max_candidates=8):
    """All distinct decomposable directions found in the span of the basis.

    Starting factors come from a deterministic minor-root sweep
    (two-dimensional spans), the dominant factors of the basis vectors, and a
    budgeted set of seeded random vectors; each is refined by Gauss-Newton
    toward the rank-one points of the span and certified by the residual of
    the fitted combination.
    """
    _check_tol(tol)
    if isinstance(basis, np.ndarray) and basis.ndim == 2:
        basis = np.asarray(basis, dtype=complex)
    else:
        basis = np.column_stack([np.asarray(b, dtype=complex).ravel() for b in basis])
    d = basis.shape[1]
    if d == 0:
        return []
    n = int(round(np.sqrt(basis.shape[0])))

    found = []

    if d == 1:
        z = basis[:, 0]
        if np.linalg.norm(z) == 0:
            return []
        x = symmetric_rank_one_factor(z, tol)
        if x is not None:
            found.append((np.array([1.0 + 0.0j]), x))
        return found

    qbasis = np.linalg.qr(basis)[0]

    def consider(x0):
        if x0 is None or np.linalg.norm(x0) == 0:
            return
        x = _refine_factor(qbasis, np.asarray(x0, dtype=complex))
        if x is None:
            return
        target = np.kron(x, x)
        nt = np.linalg.norm(target)
        if nt == 0:
            return
        coeffs, *_ = np.linalg.lstsq(basis, target, rcond=None)
        if np.linalg.norm(basis @ coeffs - target) > tol * nt:
            return
        x = sign_align(x)
        for _, xf in found:
            if projective_distance(x, xf) < 1e-8:
                return
        found.append((coeffs, x))

    if d == 2:
        for c0 in _minor_root_candidates(basis):
            if len(found) >= max_candidates:
                return found
            consider(_dominant_factor(basis @ (c0 / np.linalg.norm(c0))))
    for k in range(d):
        if len(found) >= max_candidates:
            return found
        consider(_dominant_factor(basis[:, k]))
    for trial in range(starts):
        if len(found) >= max_candidates:
            break
        rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(trial,)))
        consider(rng.standard_normal(n) + 1j * rng.standard_normal(n))
    return found


def decomposable_in_span(basis, tol, *, seed=0, starts=24):
    """First decomposable combination found in the span, or None.

    Returns (coefficients, x) with basis @ coefficients close to x kron x.
    """
    cands = decomposable_candidates(basis, tol, seed=seed, starts=starts, max_candidates=1)
    return cands[0] if cands else None

import numpy as np
import pytest
from numpy.testing import assert_allclose

from kronpencil.linalg import (
    canonicalize,
    column_compression,
    decomposable_candidates,
    decomposable_in_span,
    normalize_problem,
    nullspace,
    numerical_rank,
    projective_distance,
    row_compression,
    symmetric_rank_one_factor,
)
from kronpencil.problem import UnsupportedShapeError

from conftest import random_complex


def test_numerical_rank_basics():
    assert numerical_rank(np.eye(3), 1e-8) == 3
    assert numerical_rank(np.zeros((4, 2)), 1e-8) == 0
    assert numerical_rank(np.diag([1.0, 1e-12]), 1e-8) == 1
    with pytest.raises(ValueError):
        numerical_rank(np.eye(2), 0.0)
    with pytest.raises(ValueError):
        numerical_rank(np.eye(2), 2.0)


def test_canonicalize_and_distance():
    v = canonicalize(np.array([1j, -2.0]))
    assert abs(np.linalg.norm(v) - 1.0) < 1e-15
    assert v[1].imag == 0 and v[1].real > 0
    u = np.array([1.0, 2.0, 0.5j])
    assert projective_distance(u, 3j * u) < 1e-15
    w = np.array([1.0, 0.0, 0.0])
    z = np.array([0.0, 1.0, 0.0])
    assert abs(projective_distance(w, z) - 1.0) < 1e-15
    with pytest.raises(ValueError):
        canonicalize(np.zeros(3))


def test_row_compression_full_rank_and_vector():
    res = row_compression(np.array([[1.0, 0.0], [0.0, 2.0]]), 1e-10)
    assert res.rank == 2
    res = row_compression(np.array([[1.0], [1.0]]), 1e-10)
    assert res.rank == 1
    assert abs(abs(res.compressed[0, 0]) - np.sqrt(2.0)) < 1e-14
    assert abs(res.compressed[1, 0]) < 1e-14


@pytest.mark.parametrize("p,q,r", [(4, 3, 2), (5, 2, 1), (6, 4, 3)])
def test_compressions_reconstruct(p, q, r):
    rng = np.random.default_rng(p * 10 + q)
    mat = random_complex(rng, (p, r)) @ random_complex(rng, (r, q))
    eps = np.finfo(float).eps
    for comp, row_form in ((row_compression(mat, 1e-10), True),
                           (column_compression(mat, 1e-10), False)):
        assert comp.rank == r
        w = comp.transform
        assert np.linalg.norm(w.conj().T @ w - np.eye(w.shape[0])) <= 100 * eps * p
        if row_form:
            recon = w.conj().T @ comp.compressed
            assert np.linalg.norm(comp.compressed[r:, :]) == 0
        else:
            recon = comp.compressed @ w.conj().T
            assert np.linalg.norm(comp.compressed[:, r:]) == 0
        assert np.linalg.norm(recon - mat) <= 100 * eps * p * np.linalg.norm(mat)


def test_nullspace_basics():
    assert nullspace(np.eye(2), 1e-10).shape == (2, 0)
    basis = nullspace(np.array([[1.0, 1.0]]), 1e-10)
    assert basis.shape == (2, 1)
    assert_allclose(abs(basis[:, 0]), [1 / np.sqrt(2)] * 2, atol=1e-14)
    rng = np.random.default_rng(2)
    mat = random_complex(rng, (5, 3)) @ random_complex(rng, (3, 6))
    basis = nullspace(mat, 1e-10)
    assert basis.shape == (6, 3)
    assert np.linalg.norm(mat @ basis) <= 1e-10 * np.linalg.norm(mat) * 3
    assert_allclose(basis.conj().T @ basis, np.eye(3), atol=1e-13)


def test_nullspace_of_pencil_at_known_solution(ex3_matrices):
    a0, a1, a2 = ex3_matrices
    pencil = 1.0 * a0 - 2.0 * a1 - 3.0 * a2
    basis = nullspace(pencil, 1e-10)
    assert basis.shape == (2, 1)
    assert projective_distance(basis[:, 0], np.array([1.0, 0.0])) < 1e-12


def test_normalize_problem_identity_maps(ex1_matrices):
    problem, right_map, left_map = normalize_problem(*ex1_matrices, 1e-8)
    assert problem.normalized
    np.testing.assert_array_equal(right_map, np.eye(3))
    np.testing.assert_array_equal(left_map, np.eye(4))


def test_normalize_problem_drops_common_zero_column():
    rng = np.random.default_rng(7)
    mats = [random_complex(rng, (4, 2)) for _ in range(3)]
    padded = [np.hstack([m[:, :1], np.zeros((4, 1)), m[:, 1:]]) for m in mats]
    problem, right_map, _ = normalize_problem(*padded, 1e-8)
    assert problem.n == 2 and problem.m == 4
    # lifted coordinates live in the nonzero-column span
    x = np.array([1.0, 1.0], dtype=complex)
    lifted = right_map @ x
    assert abs(lifted[1]) < 1e-12


def test_normalize_problem_drops_common_zero_row():
    rng = np.random.default_rng(8)
    mats = [random_complex(rng, (3, 2)) for _ in range(3)]
    padded = [np.vstack([m[:2, :], np.zeros((1, 2)), m[2:, :]]) for m in mats]
    problem, _, left_map = normalize_problem(*padded, 1e-8)
    assert problem.m == 3 and problem.n == 2
    assert left_map.shape == (3, 4)


def test_normalize_problem_idempotent():
    rng = np.random.default_rng(9)
    mats = [random_complex(rng, (5, 3)) for _ in range(3)]
    problem, _, _ = normalize_problem(*mats, 1e-8)
    again, right_map, left_map = normalize_problem(*problem.matrices, 1e-8)
    np.testing.assert_array_equal(right_map, np.eye(3))
    np.testing.assert_array_equal(left_map, np.eye(5))


def test_normalize_problem_rejects_wide_result():
    # all three matrices share a rank-one row space: m collapses to 1 <= n
    base = np.array([[1.0, 2.0]])
    mats = [np.vstack([c * base]) for c in (1.0, 2.0, 3.0)]
    mats = [np.vstack([m, 2 * m, 3 * m]) for m in mats]
    with pytest.raises(UnsupportedShapeError):
        normalize_problem(*mats, 1e-8)


def test_symmetric_rank_one_factor_basic():
    z = np.kron(np.array([1.0, 2.0]), np.array([1.0, 2.0]))
    x = symmetric_rank_one_factor(z, 1e-10)
    assert x is not None
    assert np.linalg.norm(np.kron(x, x) - z) <= 1e-10 * np.linalg.norm(z)
    assert x[np.argmax(np.abs(x))].real > 0
    assert symmetric_rank_one_factor(np.array([1.0, 0, 0, 1.0]), 1e-10) is None
    x = symmetric_rank_one_factor(np.array([1.0, 1.0, 1.0, 1.0]), 1e-10)
    assert projective_distance(x, np.array([1.0, 1.0])) < 1e-12
    with pytest.raises(ValueError):
        symmetric_rank_one_factor(np.zeros(4), 1e-10)


def test_symmetric_rank_one_factor_isotropic_vector():
    # x with x.T @ x = 0: the outer square is nilpotent but still rank one
    x_true = np.array([1.0, 1j])
    z = np.kron(x_true, x_true)
    x = symmetric_rank_one_factor(z, 1e-10)
    assert x is not None
    assert np.linalg.norm(np.kron(x, x) - z) <= 1e-10 * np.linalg.norm(z)


@pytest.mark.parametrize("n", range(2, 9))
def test_symmetric_rank_one_factor_random_roundtrip(n):
    rng = np.random.default_rng(40 + n)
    for _ in range(5):
        x_true = random_complex(rng, (n,))
        x_true /= np.linalg.norm(x_true)
        z = np.kron(x_true, x_true)
        x = symmetric_rank_one_factor(z, 1e-10)
        assert x is not None
        assert np.linalg.norm(np.kron(x, x) - z) <= 1e-10
        assert projective_distance(x, x_true) < 1e-10


def test_symmetric_rank_one_factor_rejects_skewed_input():
    rng = np.random.default_rng(3)
    skew = random_complex(rng, (3, 3))
    skew = skew - skew.T
    x = np.array([1.0, 2.0, 3.0])
    z = np.kron(x, x) + skew.reshape(-1, order="F")
    assert symmetric_rank_one_factor(z, 1e-8) is None


def test_decomposable_in_span_single_vector():
    x = np.array([1.0, 2.0])
    res = decomposable_in_span([np.kron(x, x)], 1e-8)
    assert res is not None
    coeffs, xf = res
    assert projective_distance(xf, x) < 1e-10
    vec_identity = np.eye(2).reshape(-1, order="F")
    assert decomposable_in_span([vec_identity], 1e-8) is None


def test_decomposable_in_span_two_dim_family():
    # the span {(1,1,1,0), (0,0,0,1)} contains (1,1,1,1) = (1,1) kron (1,1)
    b1 = np.array([1.0, 1.0, 1.0, 0.0])
    b2 = np.array([0.0, 0.0, 0.0, 1.0])
    cands = decomposable_candidates(np.column_stack([b1, b2]), 1e-8, seed=1)
    assert cands
    xs = [x for _, x in cands]
    assert any(projective_distance(x, np.array([1.0, 1.0])) < 1e-8 for x in xs)
    # e2 kron e2 = (0,0,0,1) is also in the span
    assert any(projective_distance(x, np.array([0.0, 1.0])) < 1e-8 for x in xs)


@pytest.mark.parametrize("n,d", [(3, 2), (4, 3), (3, 3)])
def test_decomposable_in_span_planted_random(n, d):
    hits = 0
    trials = 25
    for t in range(trials):
        rng = np.random.default_rng(1000 * n + 10 * d + t)
        x_true = random_complex(rng, (n,))
        x_true /= np.linalg.norm(x_true)
        cols = [np.kron(x_true, x_true)]
        for _ in range(d - 1):
            s = random_complex(rng, (n, n))
            s = s + s.T  # random symmetric, almost surely not rank one
            cols.append(s.reshape(-1, order="F"))
        basis = np.column_stack(cols)
        # random unitary mix so the planted direction is not a basis vector
        q = np.linalg.qr(random_complex(rng, (d, d)))[0]
        res = decomposable_in_span(basis @ q, 1e-8, seed=t, starts=24)
        if res is None:
            continue
        coeffs, x = res
        z = (basis @ q) @ coeffs
        if np.linalg.norm(np.kron(x, x) - z) <= 1e-8 * np.linalg.norm(z):
            hits += 1
    assert hits >= int(0.99 * trials)


def test_decomposable_in_span_recovers_coefficients():
    x = np.array([1.0, 1.0])
    b1 = np.array([1.0, 1.0, 1.0, 0.0])
    b2 = np.array([0.0, 0.0, 0.0, 1.0])
    res = decomposable_in_span(np.column_stack([b1, b2]), 1e-8, seed=3)
    coeffs, xf = res
    z = np.column_stack([b1, b2]) @ coeffs
    assert np.linalg.norm(np.kron(xf, xf) - z) <= 1e-8 * np.linalg.norm(z)

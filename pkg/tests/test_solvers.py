import numpy as np
import pytest
from numpy.testing import assert_allclose

from kronpencil.linalg import nullspace, projective_distance
from kronpencil.operators import DeterminantTriple, kronecker_determinants
from kronpencil.problem import CommutationError, PencilProblem, UnsupportedShapeError
from kronpencil.solvers import (
    commuting_joint_eigs,
    find_nonsingular_combination,
    simultaneous_deflated_solutions,
    solve_rect_pencil,
)

import golden_data as gold
from conftest import planted_pair, random_complex


def _match_point(result, nu):
    nu = np.asarray(nu, dtype=complex)
    return [s for s in result.solutions if projective_distance(s.nu, nu) < 1e-6]


def test_rect_pencil_diagonal_case():
    a = np.eye(2, dtype=complex)
    b = np.diag([2.0, 3.0]).astype(complex)
    res = solve_rect_pencil(a, b, 1e-8)
    assert not res.continuum
    assert len(res.solutions) == 2
    for nu, xref in [((-2.0, 1.0), [1.0, 0.0]), ((-3.0, 1.0), [0.0, 1.0])]:
        hits = _match_point(res, nu)
        assert len(hits) == 1
        assert projective_distance(hits[0].x, np.array(xref)) < 1e-8


def test_rect_pencil_no_solution_column():
    a = np.array([[1.0], [0.0]])
    b = np.array([[0.0], [1.0]])
    res = solve_rect_pencil(a, b, 1e-8)
    assert res.solutions == []
    assert not res.continuum


def test_rect_pencil_shape_and_zero():
    with pytest.raises(UnsupportedShapeError):
        solve_rect_pencil(np.ones((2, 3)), np.ones((2, 3)), 1e-8)
    res = solve_rect_pencil(np.zeros((3, 2)), np.zeros((3, 2)), 1e-8)
    assert res.continuum and res.representative is not None


def test_rect_pencil_square_generalized_agrees_with_eig():
    rng = np.random.default_rng(21)
    a = random_complex(rng, (4, 4))
    b = random_complex(rng, (4, 4))
    res = solve_rect_pencil(a, b, 1e-8)
    assert len(res.solutions) == 4
    import scipy.linalg as sla

    w = sla.eigvals(a, b)  # a v = w b v -> (a - w b) v = 0 -> nu = (1, -w)
    for wi in w:
        nu = np.array([1.0, -wi])
        assert any(projective_distance(s.nu, nu) < 1e-9 for s in res.solutions)


def test_rect_pencil_verifies_smallest_singular_value():
    rng = np.random.default_rng(22)
    for trial in range(10):
        x = random_complex(rng, (3,))
        nu = random_complex(rng, (2,))
        nu[1] += 1.5
        a, b = planted_pair(rng, 5, 3, nu, x)
        res = solve_rect_pencil(a, b, 1e-8)
        hits = _match_point(res, nu)
        assert len(hits) == 1
        scale = np.linalg.norm(a, 2) + np.linalg.norm(b, 2)
        member = hits[0].nu[0] * a + hits[0].nu[1] * b
        assert np.linalg.svd(member, compute_uv=False)[-1] <= 1e-8 * scale
        assert np.linalg.norm(member @ hits[0].x) <= 1e-7 * scale


def test_rect_pencil_singular_family_with_isolated_point(ex2_matrices):
    # deflated pair (Gamma0, Gamma1) of the continuum example: the pencil is
    # singular as a pencil, yet the point proportional to (1, -2) drops the
    # rank further
    dets = kronecker_determinants(PencilProblem(*ex2_matrices), "integer")
    res = solve_rect_pencil(dets.gamma1, -dets.gamma0, 1e-8)
    assert res.continuum
    assert res.representative is not None
    hits = _match_point(res, np.array([1.0, -2.0]))
    assert len(hits) == 1


def test_rect_pencil_deterministic_given_seed():
    rng = np.random.default_rng(4)
    a = random_complex(rng, (4, 3))
    b = random_complex(rng, (4, 3))
    r1 = solve_rect_pencil(a, b, 1e-8, seed=11)
    r2 = solve_rect_pencil(a, b, 1e-8, seed=11)
    assert len(r1.solutions) == len(r2.solutions)
    for s1, s2 in zip(r1.solutions, r2.solutions):
        np.testing.assert_array_equal(s1.nu, s2.nu)
        np.testing.assert_array_equal(s1.x, s2.x)


def _dets_from_gammas(g0, g1, g2, m, n):
    return DeterminantTriple(
        gamma0=np.asarray(g0, dtype=complex),
        gamma1=np.asarray(g1, dtype=complex),
        gamma2=np.asarray(g2, dtype=complex),
        scaling="integer",
        m=m,
        n=n,
    )


def test_simultaneous_deflated_single_solution(ex3_matrices):
    dets = kronecker_determinants(PencilProblem(*ex3_matrices), "integer")
    cands = simultaneous_deflated_solutions(dets, 1e-8)
    isolated = [c for c in cands if c.lam is not None and not c.continuum]
    assert len(isolated) == 1
    lam = isolated[0].lam
    assert projective_distance(lam, np.array([1.0, -2.0, -3.0])) < 1e-8
    assert projective_distance(isolated[0].y, np.array([1.0, 0.0, 0.0])) < 1e-8


def test_simultaneous_deflated_families(ex2_matrices):
    dets = kronecker_determinants(PencilProblem(*ex2_matrices), "integer")
    cands = simultaneous_deflated_solutions(dets, 1e-8)
    isolated = [
        c
        for c in cands
        if c.lam is not None
        and not c.continuum
        and projective_distance(c.lam, np.array([1.0, -2.0, 1.0])) < 1e-6
    ]
    assert isolated, "isolated eigenvalue proportional to (1,-2,1) not found"
    # its admissible y space holds the family (1, a, 1)
    ybasis = isolated[0].y_basis
    for a_val in (0.0, 1.0, -2.5):
        y = np.array([1.0, a_val, 1.0])
        proj = ybasis @ (ybasis.conj().T @ y)
        assert np.linalg.norm(proj - y) < 1e-8
    free = [c for c in cands if c.lam is None]
    assert len(free) == 1
    assert projective_distance(free[0].y, np.array([0.0, 1.0, 0.0])) < 1e-8


def test_simultaneous_deflated_identity_continuum():
    eye = np.eye(4)
    dets = _dets_from_gammas(eye, eye, eye, m=4, n=3)  # shapes only nominal
    cands = simultaneous_deflated_solutions(dets, 1e-8)
    assert len(cands) == 1
    c = cands[0]
    assert c.continuum
    assert projective_distance(c.lam, np.array([1.0, 1.0, 1.0])) < 1e-8
    assert c.y_basis.shape[1] == 4


def test_simultaneous_deflated_no_solution():
    # generic full-column-rank tall determinants admit no simultaneous point
    rng = np.random.default_rng(33)
    g = [random_complex(rng, (6, 3)) for _ in range(3)]
    dets = _dets_from_gammas(*g, m=4, n=2)
    cands = simultaneous_deflated_solutions(dets, 1e-8)
    assert cands == []


def test_find_nonsingular_combination_examples(ex1_matrices, ex2_matrices):
    dets1 = kronecker_determinants(PencilProblem(*ex1_matrices), "integer")
    found = find_nonsingular_combination(dets1, seed=0, trials=16)
    assert found is not None
    alpha, cond = found
    # the first determinant matrix alone is already nonsingular
    assert_allclose(alpha, [1.0, 0.0, 0.0])
    assert cond < 1e3

    dets2 = kronecker_determinants(PencilProblem(*ex2_matrices), "integer")
    assert find_nonsingular_combination(dets2, seed=0, trials=32) is None


def test_find_nonsingular_combination_trivial_and_errors():
    eye = np.eye(3)
    zero = np.zeros((3, 3))
    dets = _dets_from_gammas(eye, zero, zero, m=3, n=2)
    alpha, cond = find_nonsingular_combination(dets, seed=1, trials=4)
    assert_allclose(alpha, [1.0, 0.0, 0.0])
    assert cond == pytest.approx(1.0)
    tall = _dets_from_gammas(np.ones((4, 3)), np.ones((4, 3)), np.ones((4, 3)), 4, 2)
    with pytest.raises(UnsupportedShapeError):
        find_nonsingular_combination(tall, seed=0, trials=2)


def test_commuting_joint_eigs_diagonal():
    d0 = np.diag([1.0, 2.0, 3.0])
    d1 = np.diag([4.0, 5.0, 6.0])
    d2 = np.diag([7.0, 8.0, 9.0])
    pairs = commuting_joint_eigs(d0, d1, d2, 1e-10, seed=0)
    assert len(pairs) == 3
    got = sorted((np.round(l.real, 8).tolist() for l, _ in pairs))
    assert got == [[1.0, 4.0, 7.0], [2.0, 5.0, 8.0], [3.0, 6.0, 9.0]]
    for lam, y in pairs:
        k = int(np.argmax(np.abs(y)))
        assert projective_distance(y, np.eye(3)[:, k]) < 1e-10


def test_commuting_joint_eigs_planted_similarity():
    rng = np.random.default_rng(31)
    nt = 5
    s = random_complex(rng, (nt, nt))
    ds = [np.diag(random_complex(rng, (nt,))) for _ in range(3)]
    sinv = np.linalg.inv(s)
    ms = [s @ d @ sinv for d in ds]
    pairs = commuting_joint_eigs(*ms, 1e-8, seed=5)
    assert len(pairs) == nt
    for k in range(nt):
        planted = np.array([ds[0][k, k], ds[1][k, k], ds[2][k, k]])
        best = min(projective_distance(l, planted) for l, _ in pairs)
        assert best < 1e-7


def test_commuting_joint_eigs_example_matrices(ex1_matrices):
    dets = kronecker_determinants(PencilProblem(*ex1_matrices), "integer")
    g0inv = np.linalg.inv(dets.gamma0)
    ms = [g0inv @ g for g in dets.gammas]
    pairs = commuting_joint_eigs(*ms, 1e-6, seed=2)
    assert len(pairs) == 6
    key = lambda row: (row[0].real, row[0].imag, row[1].real, row[1].imag)
    chart = np.array(sorted(((l / l[0])[1:] for l, _ in pairs), key=key))
    want = np.array(sorted(gold.EX1_EIGENVALUES_CHART, key=key))
    assert_allclose(chart, want, atol=5e-4)


def test_commuting_joint_eigs_rejects_noncommuting():
    a = np.array([[0.0, 1.0], [0.0, 0.0]])
    b = np.array([[0.0, 0.0], [1.0, 0.0]])
    with pytest.raises(CommutationError):
        commuting_joint_eigs(a, b, np.eye(2), 1e-10)


def test_commuting_joint_eigs_clustered_fallback():
    # shared eigenvector structure with a repeated joint eigenvalue
    q = np.linalg.qr(random_complex(np.random.default_rng(3), (3, 3)))[0]
    ms = [
        q @ np.diag([2.0, 2.0, 5.0]) @ q.conj().T,
        q @ np.diag([3.0, 3.0, 7.0]) @ q.conj().T,
        q @ np.diag([1.0, 1.0, 9.0]) @ q.conj().T,
    ]
    pairs = commuting_joint_eigs(*ms, 1e-8, seed=1)
    lams = {tuple(np.round(l.real, 6)) for l, _ in pairs}
    assert (2.0, 3.0, 1.0) in lams
    assert (5.0, 7.0, 9.0) in lams


def test_determinant_equation_membership():
    rng = np.random.default_rng(44)
    mats = [rng.integers(-4, 5, size=(4, 3)).astype(complex) for _ in range(3)]
    dets = kronecker_determinants(PencilProblem(*mats), "integer")
    found = find_nonsingular_combination(dets, seed=0, trials=16)
    if found is None:
        pytest.skip("random draw degenerate")
    alpha, _ = found
    ginv = np.linalg.inv(dets.combine(alpha))
    ms = [ginv @ g for g in dets.gammas]
    pairs = commuting_joint_eigs(*ms, 1e-6, seed=0)
    gscale = max(np.linalg.norm(g, 2) for g in dets.gammas)
    for lam, y in pairs:
        for i, j in ((0, 1), (0, 2), (1, 2)):
            res = np.linalg.norm(dets.pair_pencil(i, j, lam[i], lam[j]) @ y)
            assert res <= 1e-7 * gscale * max(1.0, np.abs(lam).max())

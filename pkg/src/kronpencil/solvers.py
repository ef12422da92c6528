"""One-parameter rectangular pencil solver and the two reduction paths built
on top of it: simultaneous deflated pencils and the commuting joint
eigenproblem.

Projective eigenvalues are represented by canonical unit vectors (largest
modulus component real positive); equality is tested by the sine of the angle
between complex lines.
"""

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla

from .linalg import canonicalize, nullspace, projective_distance
from .problem import CommutationError, UnsupportedShapeError

DEDUP_TOL = 1e-6


@dataclass
class OneParamSolution:
    """Projective point nu (canonical 2-vector) of a rectangular pencil
    nu[0]*A + nu[1]*B and a null vector at that point."""

    nu: np.ndarray
    x: np.ndarray
    kind: str  # "isolated" | "continuum-representative"


@dataclass
class RectPencilResult:
    solutions: list
    continuum: bool
    representative: OneParamSolution | None
    generic_rank: int
    diagnostics: dict = field(default_factory=dict)


def _rank_abs(mat, thresh):
    if mat.size == 0:
        return 0
    s = np.linalg.svd(mat, compute_uv=False)
    return int(np.count_nonzero(s > thresh))


def _strip_right_singular(ac, bc, thresh, log):
    """Staircase deflation eating the right singular structure of the pencil
    ac + t*bc, assuming neither t=0 nor t=infinity is an eigenvalue (which the
    caller guarantees by random recombination).  Each round removes the null
    columns of ac and the rows their bc-image spans; what remains carries the
    regular and left singular structure only."""
    while True:
        p, q = ac.shape
        if q == 0:
            break
        if p == 0:
            log.append(("strip", p, q, 0, 0))
            ac = np.zeros((0, 0), dtype=complex)
            bc = np.zeros((0, 0), dtype=complex)
            break
        _, s, vh = np.linalg.svd(ac)
        ra = int(np.count_nonzero(s > thresh))
        k = q - ra
        if k == 0:
            break
        vmat = vh.conj().T
        a1 = (ac @ vmat)[:, :ra]
        btr = bc @ vmat
        b1, b0 = btr[:, :ra], btr[:, ra:]
        ub, sb, _ = np.linalg.svd(b0)
        kp = int(np.count_nonzero(sb > thresh))
        pm = ub.conj().T
        ac = (pm @ a1)[kp:, :]
        bc = (pm @ b1)[kp:, :]
        log.append(("strip", p, q, ra, kp))
    return ac, bc


def _null_vector(mat):
    """Smallest right singular vector (canonical)."""
    _, _, vh = np.linalg.svd(mat)
    return canonicalize(vh[-1, :].conj())


def solve_rect_pencil(a, b, tol, *, seed=0, dedup_tol=DEDUP_TOL):
    """All isolated projective points where nu[0]*A + nu[1]*B loses column
    rank, plus a continuum flag when the pencil is singular as a pencil.

    The pencil is recombined through a random unitary 2x2 mix so that the two
    working endpoints are not eigenvalues, the singular structure is stripped
    by a two-sided rank-revealing staircase, and the surviving square regular
    part is handed to a generalized eigensolver.  Candidates are verified by
    a rank-drop test against the generic rank before being returned.
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    p, q = a.shape
    if q < 1 or p < q:
        raise UnsupportedShapeError(f"need p >= q >= 1, got {p}x{q}")
    diagnostics = {"staircase": [], "seed": seed}

    scale = np.linalg.norm(a, 2) + np.linalg.norm(b, 2)
    if scale == 0:
        rep = OneParamSolution(
            nu=canonicalize(np.array([1.0, 0.0])),
            x=canonicalize(np.eye(q, dtype=complex)[:, 0]),
            kind="continuum-representative",
        )
        return RectPencilResult([], True, rep, 0, diagnostics)
    thresh = tol * scale

    mix = None
    r1 = r2 = 0
    for attempt in range(8):
        rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(attempt,)))
        g = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        cand_mix = np.linalg.qr(g)[0]
        c1 = cand_mix[0, 0] * a + cand_mix[0, 1] * b
        c2 = cand_mix[1, 0] * a + cand_mix[1, 1] * b
        r1, r2 = _rank_abs(c1, thresh), _rank_abs(c2, thresh)
        mix = cand_mix
        if r1 == r2:
            break
    generic_rank = max(r1, r2)
    diagnostics["generic_rank"] = generic_rank
    continuum = generic_rank < q

    representative = None
    if continuum:
        representative = OneParamSolution(
            nu=canonicalize(np.array([mix[0, 0], mix[0, 1]])),
            x=_null_vector(c1),
            kind="continuum-representative",
        )

    a_red, b_red = _strip_right_singular(c1, c2, thresh, diagnostics["staircase"])
    a_red, b_red = _strip_right_singular(a_red.T, b_red.T, thresh, diagnostics["staircase"])
    a_reg, b_reg = a_red.T, b_red.T
    diagnostics["regular_size"] = a_reg.shape

    solutions = []
    if a_reg.size and a_reg.shape[0] == a_reg.shape[1]:
        w = sla.eigvals(a_reg, b_reg)
        for lam in w:
            t = -lam
            if not np.isfinite(t):
                continue
            nu = canonicalize(mix.T @ np.array([1.0, t]))
            member = nu[0] * a + nu[1] * b
            s = np.linalg.svd(member, compute_uv=False)
            drop = s[generic_rank - 1] if generic_rank >= 1 else 0.0
            if drop > thresh:
                continue
            if any(projective_distance(nu, sol.nu) < dedup_tol for sol in solutions):
                continue
            solutions.append(OneParamSolution(nu=nu, x=_null_vector(member), kind="isolated"))
    return RectPencilResult(solutions, continuum, representative, generic_rank, diagnostics)


@dataclass
class DeflatedCandidate:
    """Candidate solution of the three simultaneous deflated pencils.

    ``lam`` is None for eigenvectors annihilated by all three determinant
    matrices (any eigenvalue works); ``y_basis`` spans every admissible y at
    that eigenvalue at the working tolerance."""

    lam: np.ndarray | None
    y: np.ndarray
    y_basis: np.ndarray
    kind: str  # "isolated" | "family-member" | "free-lambda"
    continuum: bool


_PAIRS = ((0, 1), (0, 2), (1, 2))


def _stacked_member(gammas, lam):
    rows = [lam[i] * gammas[j] - lam[j] * gammas[i] for i, j in _PAIRS]
    return np.vstack(rows)


def simultaneous_deflated_solutions(dets, tol, *, seed=0, dedup_tol=DEDUP_TOL):
    """Simultaneous solutions of the three pair pencils on the deflated
    determinant triple.

    One pivot pair (chosen by a conditioning proxy) generates candidate
    points; the third eigenvalue component is recovered by solving a second
    pencil restricted to the pivot null space, anchored at the larger pivot
    component.  Every candidate is filtered by the stacked requirement that a
    common null vector exists for all three pairs.  Singular-pencil families
    are reported through representatives; isolated solutions buried inside a
    family away from every pivot rank drop are reported via those
    representatives only.  An empty return certifies that the deflated system
    (and hence the original pencil problem) has no solution.
    """
    gammas = [np.asarray(g, dtype=complex) for g in dets.gammas]
    mt, nt = gammas[0].shape
    gscale = max(np.linalg.norm(g, 2) for g in gammas)
    if gscale == 0:
        # zero determinants: every (lam, y) solves
        basis = np.eye(nt, dtype=complex)
        return [DeflatedCandidate(None, canonicalize(basis[:, 0]), basis, "free-lambda", True)]

    rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(0xA11CE,)))
    proxy = []
    for i, j in _PAIRS:
        w = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        w /= np.linalg.norm(w)
        member = w[0] * gammas[j] - w[1] * gammas[i]
        s = np.linalg.svd(member, compute_uv=False)
        proxy.append(s[min(mt, nt) - 1])
    pi, pj = _PAIRS[int(np.argmax(proxy))]
    pk = 3 - pi - pj

    pivot = solve_rect_pencil(gammas[pj], -gammas[pi], tol, seed=seed + 1)
    points = [(sol.nu, "isolated") for sol in pivot.solutions]
    if pivot.continuum and pivot.representative is not None:
        points.append((pivot.representative.nu, "family-member"))

    common = nullspace(np.vstack(gammas), tol, scale=gscale)
    candidates = []

    def extra_null_dims(ybasis):
        # dimensions of the admissible y space beyond the all-determinant
        # common null space
        if common.shape[1] == 0:
            return ybasis.shape[1]
        overlap = np.linalg.svd(common.conj().T @ ybasis, compute_uv=False)
        return ybasis.shape[1] - int(np.count_nonzero(overlap > 0.5))

    def add_candidate(lam, kind, continuum):
        lam = np.asarray(lam, dtype=complex)
        if np.linalg.norm(lam) == 0:
            return
        lam = canonicalize(lam)
        ybasis = nullspace(_stacked_member(gammas, lam), tol, scale=gscale)
        if ybasis.shape[1] == 0:
            return
        continuum = continuum or extra_null_dims(ybasis) >= 2
        for c in candidates:
            if c.lam is not None and projective_distance(c.lam, lam) < dedup_tol:
                c.continuum = c.continuum or continuum
                return
        candidates.append(
            DeflatedCandidate(lam, canonicalize(ybasis[:, 0]), ybasis, kind, continuum)
        )

    for nu, kind in points:
        lam_i, lam_j = nu
        member = lam_i * gammas[pj] - lam_j * gammas[pi]
        nbasis = nullspace(member, tol, scale=gscale)
        if nbasis.shape[1] == 0:
            continue
        if abs(lam_i) >= abs(lam_j):
            anchor_val = lam_i
            g_anchor = gammas[pi]
        else:
            anchor_val = lam_j
            g_anchor = gammas[pj]
        inner = solve_rect_pencil(gammas[pk] @ nbasis, g_anchor @ nbasis, tol, seed=seed + 2)
        inner_points = [(sol.nu, sol.kind) for sol in inner.solutions]
        if inner.continuum and inner.representative is not None:
            inner_points.append((inner.representative.nu, "continuum-representative"))
        for mu, ikind in inner_points:
            lam = np.zeros(3, dtype=complex)
            lam[pi] = mu[0] * lam_i
            lam[pj] = mu[0] * lam_j
            lam[pk] = -mu[1] * anchor_val
            cont = kind != "isolated" or ikind != "isolated"
            add_candidate(lam, "family-member" if cont else "isolated", cont)

    # eigenvalues supported only on the third axis: both pivot components zero
    third = np.zeros(3, dtype=complex)
    third[pk] = 1.0
    if nullspace(np.vstack([gammas[pi], gammas[pj]]), tol, scale=gscale).shape[1] > 0:
        add_candidate(third, "isolated", False)

    # eigenvectors annihilated by all three determinants admit any eigenvalue
    if common.shape[1] > 0:
        candidates.append(
            DeflatedCandidate(None, canonicalize(common[:, 0]), common, "free-lambda", True)
        )
    return candidates


def find_nonsingular_combination(dets, *, seed=0, trials=64, cond_threshold=1e10):
    """First coefficient triple making the combined determinant matrix well
    conditioned: canonical basis vectors first, then seeded random unit
    triples.  Returns (alpha, condition) or None when the budget is spent
    (the combination may then not exist, or remains undetermined)."""
    if not dets.square:
        raise UnsupportedShapeError("combination search needs square determinant matrices")
    cands = [np.eye(3, dtype=complex)[:, k] for k in range(3)]
    for trial in range(trials):
        rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(trial,)))
        alpha = rng.standard_normal(3) + 1j * rng.standard_normal(3)
        cands.append(alpha / np.linalg.norm(alpha))
    for alpha in cands:
        g = dets.combine(alpha)
        if g.size == 0:
            return alpha, 1.0
        cond = np.linalg.cond(g)
        if np.isfinite(cond) and cond <= cond_threshold:
            return alpha, float(cond)
    return None


def _commutation_residual(ms):
    worst = 0.0
    for i in range(len(ms)):
        for j in range(i + 1, len(ms)):
            num = np.linalg.norm(ms[i] @ ms[j] - ms[j] @ ms[i], 2)
            den = max(np.linalg.norm(ms[i], 2) * np.linalg.norm(ms[j], 2), 1e-300)
            worst = max(worst, num / den)
    return worst


def _cluster_eigenvalues(w, ctol):
    order = np.lexsort((w.imag, w.real))
    clusters = []
    for idx in order:
        for cl in clusters:
            if abs(w[idx] - w[cl[0]]) <= ctol:
                cl.append(idx)
                break
        else:
            clusters.append([idx])
    return clusters


def _joint_eigs_clustered(ms, basis, ctol, out):
    k = ms[0].shape[0]
    if k == 0:
        return
    if k == 1:
        lam = np.array([m[0, 0] for m in ms])
        out.append((lam, canonicalize(basis[:, 0])))
        return
    for m in ms:
        w = np.linalg.eigvals(m)
        clusters = _cluster_eigenvalues(w, ctol)
        if len(clusters) > 1:
            target = np.mean(w[clusters[0]])
            radius = ctol * 2
            t, z, sdim = sla.schur(
                m, output="complex", sort=lambda x: abs(x - target) <= radius
            )
            if 0 < sdim < k:
                q1, q2 = z[:, :sdim], z[:, sdim:]
                sub1 = [q1.conj().T @ mm @ q1 for mm in ms]
                sub2 = [q2.conj().T @ mm @ q2 for mm in ms]
                _joint_eigs_clustered(sub1, basis @ q1, ctol, out)
                _joint_eigs_clustered(sub2, basis @ q2, ctol, out)
                return
    # no matrix separates this block: treat as a single joint eigenvalue
    lam = np.array([np.mean(np.diag(m)) for m in ms])
    stacked = np.vstack([m - li * np.eye(k) for m, li in zip(ms, lam)])
    _, _, vh = np.linalg.svd(stacked)
    out.append((lam, canonicalize(basis @ vh[-1, :].conj())))


def commuting_joint_eigs(m0, m1, m2, tol, *, seed=0, trials=8):
    """Simultaneous eigenpairs of three commuting matrices.

    A random linear combination generically has simple spectrum; its
    eigenvectors are then common eigenvectors, and each eigenvalue component
    is read off as a Rayleigh quotient.  When every trial combination has
    clustered or defective spectrum the solver falls back to a recursive
    Schur splitting with eigenvalue clustering.
    """
    ms = [np.asarray(m, dtype=complex) for m in (m0, m1, m2)]
    nt = ms[0].shape[0]
    for m in ms:
        if m.shape != (nt, nt):
            raise ValueError("matrices must be square and of one size")
    resid = _commutation_residual(ms)
    if resid > tol:
        raise CommutationError(f"commutation residual {resid:.3e} exceeds {tol:.3e}")
    if nt == 0:
        return []

    mscale = max(max(np.linalg.norm(m, 2) for m in ms), 1e-300)
    for trial in range(trials):
        rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(trial,)))
        beta = rng.standard_normal(3) + 1j * rng.standard_normal(3)
        beta /= np.linalg.norm(beta)
        comb = beta[0] * ms[0] + beta[1] * ms[1] + beta[2] * ms[2]
        w, vecs = sla.eig(comb)
        if nt > 1:
            sep = min(
                abs(w[i] - w[j]) for i in range(nt) for j in range(i + 1, nt)
            )
            if sep <= 1e-6 * max(1.0, np.abs(w).max()):
                continue
        pairs = []
        for idx in range(nt):
            y = vecs[:, idx]
            y = y / np.linalg.norm(y)
            lam = np.array([np.vdot(y, m @ y) for m in ms])
            pairs.append((lam, canonicalize(y)))
        return pairs

    out = []
    ctol = max(np.sqrt(np.finfo(float).eps), tol) * max(1.0, mscale)
    _joint_eigs_clustered(ms, np.eye(nt, dtype=complex), ctol, out)
    return out

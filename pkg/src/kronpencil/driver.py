"""End-to-end solver for the two-parameter rectangular pencil problem.

Pipeline: normalize the triple, assemble the deflated determinants, pick the
solution path (joint eigenproblem of commuting matrices when m = n + 1 and a
nonsingular combination exists, simultaneous deflated pencils otherwise),
extract eigenvectors through decomposable lifted null vectors with a pencil
null-space fallback, and verify every emitted solution against the original
matrices.  Eigenvalue families (positive-dimensional solution sets) are
reported per eigenvector as the null space of [A0 x, A1 x, A2 x].
"""

import time
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla

from .linalg import (
    canonicalize,
    decomposable_candidates,
    normalize_problem,
    nullspace,
    projective_distance,
)
from .operators import deflated_lift, kronecker_determinants
from .problem import (
    CommutationError,
    InternalSolveError,
    PencilProblem,
    SolverConfig,
    StaleEigenvalueError,
)
from .solvers import (
    commuting_joint_eigs,
    find_nonsingular_combination,
    simultaneous_deflated_solutions,
)

_PAIRS = ((0, 1), (0, 2), (1, 2))


@dataclass
class Solution:
    """One verified solution.

    For a continuum family, ``lam`` is a representative member and
    ``lam_family`` an orthonormal basis of every admissible eigenvalue for
    this eigenvector; both are None-free for isolated solutions.
    """

    lam: np.ndarray
    x: np.ndarray
    residual: float
    sigma_min_ratio: float
    decomposable: bool
    continuum: bool
    lam_family: np.ndarray | None = None


@dataclass
class SolveReport:
    solutions: list
    path: str  # "generic-commuting" | "simultaneous-pencils" | "no-solution"
    alpha_used: np.ndarray | None
    gamma_condition: float | None
    config: SolverConfig
    diagnostics: dict = field(default_factory=dict)


def _as_matrices(problem):
    if isinstance(problem, PencilProblem):
        return problem.matrices
    a0, a1, a2 = problem
    return (
        np.asarray(a0, dtype=complex),
        np.asarray(a1, dtype=complex),
        np.asarray(a2, dtype=complex),
    )


def verify_solution(problem, lam, x, tol):
    """Residual report for a claimed eigenpair.

    Checks both the direct residual of the pencil applied to x and the
    smallest singular value of the pencil matrix, each relative to
    sum(|lam_i| * ||A_i||); passes when both are below tol.
    """
    mats = _as_matrices(problem)
    lam = np.asarray(lam, dtype=complex).ravel()
    x = np.asarray(x, dtype=complex).ravel()
    if np.linalg.norm(x) == 0 or np.linalg.norm(lam) == 0:
        raise ValueError("eigenvalue and eigenvector must be nonzero")
    pencil = sum(li * a for li, a in zip(lam, mats))
    scale = sum(abs(li) * np.linalg.norm(a, 2) for li, a in zip(lam, mats))
    scale = max(scale, 1e-300)
    residual = np.linalg.norm(pencil @ x) / (scale * np.linalg.norm(x))
    smin = np.linalg.svd(pencil, compute_uv=False)[-1]
    return {
        "residual": float(residual),
        "sigma_min": float(smin),
        "sigma_min_ratio": float(smin / scale),
        "passed": bool(residual <= tol and smin / scale <= tol),
    }


def verify_inflated(problem, lam, x, tol):
    """Check the three inflated pair equations on z = x kron x.

    Uses (A kron B)(x kron x) = (A x) kron (B x), so the m^2-by-n^2 operators
    are never formed.  Returns one record per index pair; a genuine solution
    of the original problem passes all three.
    """
    mats = _as_matrices(problem)
    lam = np.asarray(lam, dtype=complex).ravel()
    x = np.asarray(x, dtype=complex).ravel()
    if np.linalg.norm(x) == 0 or np.linalg.norm(lam) == 0:
        raise ValueError("eigenvalue and eigenvector must be nonzero")
    w = [a @ x for a in mats]
    norms = [np.linalg.norm(a, 2) for a in mats]
    xsq = np.linalg.norm(x) ** 2

    def delta_z(i, j):
        # commutator of (A_i, A_j) applied to x kron x
        return np.kron(w[i], w[j]) - np.kron(w[j], w[i])

    # cyclic pairs behind each deflated operator index
    cyc = {0: (1, 2), 1: (2, 0), 2: (0, 1)}
    results = {}
    for i, j in _PAIRS:
        dz_j = delta_z(*cyc[j])
        dz_i = delta_z(*cyc[i])
        res = np.linalg.norm(lam[i] * dz_j - lam[j] * dz_i)
        op_j = 2 * norms[cyc[j][0]] * norms[cyc[j][1]]
        op_i = 2 * norms[cyc[i][0]] * norms[cyc[i][1]]
        scale = max((abs(lam[i]) * op_j + abs(lam[j]) * op_i) * xsq, 1e-300)
        results[(i, j)] = {
            "residual": float(res),
            "scale": float(scale),
            "passed": bool(res <= tol * scale),
        }
    return results


def _lift_basis(y_basis, n):
    cols = [deflated_lift(y_basis[:, k], n) for k in range(y_basis.shape[1])]
    return np.column_stack(cols) if cols else np.zeros((n * n, 0), dtype=complex)


def extract_eigenvector(lam, y, problem, tol, *, seed=0, starts=16):
    """Eigenvector for a deflated solution y at eigenvalue lam.

    Lifts y back to vec-space and factors it as x kron x when possible
    (several decomposable directions are tried when y spans a subspace);
    candidates must verify against the pencil at lam.  Otherwise falls back
    to the null space of the pencil, raising ``StaleEigenvalueError`` when
    that null space is empty at the working tolerance.
    """
    lam = np.asarray(lam, dtype=complex).ravel()
    y = np.asarray(y, dtype=complex)
    if y.ndim == 1:
        y = y[:, None]
    if not np.any(y):
        raise ValueError("deflated vector must be nonzero")
    lifted = _lift_basis(y, problem.n)
    for _, x in decomposable_candidates(lifted, tol, seed=seed, starts=starts):
        if verify_solution(problem, lam, x, tol)["passed"]:
            return canonicalize(x), True
    basis = nullspace(problem.pencil(lam), tol, scale=problem.scale(lam))
    if basis.shape[1] == 0:
        raise StaleEigenvalueError(
            "pencil has no null vector at the claimed eigenvalue; "
            "tolerances upstream and downstream disagree"
        )
    x = canonicalize(basis[:, 0])
    # certify decomposability after the fact: x kron x inside the lifted span
    flag = False
    if lifted.shape[1] > 0:
        target = np.kron(x, x)
        coef, *_ = np.linalg.lstsq(lifted, target, rcond=None)
        flag = bool(
            np.linalg.norm(lifted @ coef - target) <= tol * np.linalg.norm(target)
        )
    return x, flag


def _emit(entries, lam, x, dec_flag, family, rep, dedup_tol):
    for e in entries:
        if e["continuum"] != (family is not None):
            continue
        if family is None:
            if projective_distance(e["lam"], lam) < dedup_tol:
                return
        else:
            if projective_distance(e["x"], x) < dedup_tol:
                return
    entries.append(
        {
            "lam": lam,
            "x": x,
            "decomposable": dec_flag,
            "continuum": family is not None,
            "family": family,
            "report": rep,
        }
    )


def solve(a0, a1, a2, config=None, *, force_path=None):
    """Run the full pipeline on a matrix triple and return a SolveReport.

    ``force_path="simultaneous-pencils"`` skips the joint-eigenproblem path
    even when it applies (used for cross-checking the two routes).
    """
    config = config or SolverConfig()
    t_start = time.perf_counter()
    original = _as_matrices((a0, a1, a2))
    pn, right_map, left_map = normalize_problem(*original, config.rank_tol)
    diagnostics = {
        "seed": config.seed,
        "original_shape": list(original[0].shape),
        "normalized_shape": [pn.m, pn.n],
        "events": [],
    }

    dets = kronecker_determinants(pn, "integer")
    alpha_used = None
    gamma_condition = None
    path = None
    candidates = []  # (lam-or-None, y_basis, continuum)

    if pn.m == pn.n + 1 and force_path != "simultaneous-pencils":
        found = find_nonsingular_combination(
            dets,
            seed=config.seed,
            trials=config.trials,
            cond_threshold=config.cond_threshold,
        )
        if found is None:
            diagnostics["events"].append("combination search exhausted; using pencil path")
        else:
            alpha_used, gamma_condition = found
            lu = sla.lu_factor(dets.combine(alpha_used))
            ms = [sla.lu_solve(lu, g) for g in dets.gammas]
            comm_tol = min(0.5, max(config.rank_tol * gamma_condition, 1e-7))
            try:
                pairs = commuting_joint_eigs(*ms, comm_tol, seed=config.seed)
            except CommutationError as exc:
                diagnostics["events"].append(f"joint path abandoned: {exc}")
            else:
                path = "generic-commuting"
                for lam, yvec in pairs:
                    candidates.append((np.asarray(lam), yvec[:, None], False))

    if path is None:
        path = "simultaneous-pencils"
        defl = simultaneous_deflated_solutions(dets, config.rank_tol, seed=config.seed)
        for cand in defl:
            candidates.append((cand.lam, cand.y_basis, cand.continuum))
    diagnostics["candidates"] = len(candidates)

    entries = []
    starts = min(config.trials, 24)
    for lam_cand, y_basis, cont in candidates:
        lifted = _lift_basis(y_basis, pn.n)
        x_cands = []
        for _, x in decomposable_candidates(
            lifted, config.rank_tol, seed=config.seed, starts=starts
        ):
            x_cands.append((x, True))
        if lam_cand is not None:
            nb = nullspace(
                pn.pencil(lam_cand), config.rank_tol, scale=pn.scale(lam_cand)
            )
            for k in range(nb.shape[1]):
                x_cands.append((nb[:, k], False))
        for x_n, dec_flag in x_cands:
            x_orig = canonicalize(right_map @ x_n)
            w = np.column_stack([a @ x_orig for a in original])
            lam_space = nullspace(w, config.rank_tol)
            dim = lam_space.shape[1]
            if dim == 0:
                continue
            if not dec_flag and lifted.shape[1] > 0:
                target = np.kron(x_n, x_n)
                coef, *_ = np.linalg.lstsq(lifted, target, rcond=None)
                dec_flag = bool(
                    np.linalg.norm(lifted @ coef - target)
                    <= config.rank_tol * np.linalg.norm(target)
                )
            if dim == 1:
                lam = canonicalize(lam_space[:, 0])
                rep = verify_solution(original, lam, x_orig, config.residual_tol)
                if rep["passed"]:
                    _emit(entries, lam, x_orig, dec_flag, None, rep, 1e-6)
            else:
                lam_rep = None
                if lam_cand is not None:
                    proj = lam_space @ (lam_space.conj().T @ np.asarray(lam_cand))
                    if np.linalg.norm(proj) > 1e-8:
                        lam_rep = canonicalize(proj)
                if lam_rep is None:
                    lam_rep = canonicalize(lam_space[:, 0])
                rep = verify_solution(original, lam_rep, x_orig, config.residual_tol)
                if rep["passed"]:
                    _emit(entries, lam_rep, x_orig, dec_flag, lam_space, rep, 1e-6)

    solutions = [
        Solution(
            lam=e["lam"],
            x=e["x"],
            residual=e["report"]["residual"],
            sigma_min_ratio=e["report"]["sigma_min_ratio"],
            decomposable=e["decomposable"],
            continuum=e["continuum"],
            lam_family=e["family"],
        )
        for e in entries
    ]
    solutions.sort(
        key=lambda s: (
            not s.continuum,
            tuple(np.round(np.concatenate([s.lam.real, s.lam.imag]), 9)),
        )
    )

    if not solutions:
        if pn.m == pn.n + 1:
            raise InternalSolveError(
                "no verified solution although at least one is guaranteed for m = n + 1"
            )
        path = "no-solution"

    diagnostics["runtime_s"] = time.perf_counter() - t_start
    return SolveReport(
        solutions=solutions,
        path=path,
        alpha_used=alpha_used,
        gamma_condition=gamma_condition,
        config=config,
        diagnostics=diagnostics,
    )

"""Brute-force reference solver, independent of the deflation pipeline.

Scans a coarse grid over two complex eigenvalue coordinates on each of the
three affine charts (one component pinned to 1), refines the most promising
grid points and a batch of seeded random starts with Gauss-Newton on the
bilinear system (pencil(lam) x = 0, w^H x = 1), verifies survivors by their
residual, and merges the three charts projectively.  Positive-dimensional
eigenvalue sets are folded into per-eigenvector families exactly as the main
solver reports them.

Intended for small problems (n <= 4, m <= 6); cost grows with the grid.
"""


import numpy as np

from .driver import Solution, SolveReport, verify_solution
from .linalg import canonicalize, nullspace, projective_distance
from .problem import SolverConfig


def _chart_lambda(k, pair):
    lam = np.empty(3, dtype=complex)
    others = [i for i in range(3) if i != k]
    lam[k] = 1.0
    lam[others[0]] = pair[0]
    lam[others[1]] = pair[1]
    return lam


def _grid_points(span, count):
    axis = np.linspace(-span, span, count)
    re1, im1, re2, im2 = np.meshgrid(axis, axis, axis, axis, indexing="ij")
    a = (re1 + 1j * im1).ravel()
    b = (re2 + 1j * im2).ravel()
    return np.column_stack([a, b])


def _refine(mats, k, pair, scale, iters):
    """Gauss-Newton on pencil(lam) x = 0 with a fixed normalization row."""
    m, n = mats[0].shape
    others = [i for i in range(3) if i != k]
    lam = _chart_lambda(k, pair)
    pencil = sum(li * a for li, a in zip(lam, mats))
    _, _, vh = np.linalg.svd(pencil)
    x = vh[-1, :].conj()
    w = x.copy()
    for _ in range(iters):
        pencil = sum(li * a for li, a in zip(lam, mats))
        f = np.concatenate([pencil @ x, [np.vdot(w, x) - 1.0]])
        jac = np.zeros((m + 1, 2 + n), dtype=complex)
        jac[:m, 0] = mats[others[0]] @ x
        jac[:m, 1] = mats[others[1]] @ x
        jac[:m, 2:] = pencil
        jac[m, 2:] = w.conj()
        step, *_ = np.linalg.lstsq(jac, -f, rcond=None)
        lam[others[0]] += step[0]
        lam[others[1]] += step[1]
        x = x + step[2:]
        if np.linalg.norm(f) <= 1e-14 * scale * max(1.0, np.linalg.norm(x)):
            break
        if not np.all(np.isfinite(x)) or not np.all(np.isfinite(lam)):
            return None
    nx = np.linalg.norm(x)
    if nx == 0 or not np.all(np.isfinite(lam)):
        return None
    return lam, x / nx


def brute_force_solutions(
    a0,
    a1,
    a2,
    tol=1e-8,
    *,
    grid=9,
    span=2.0,
    refine_iters=30,
    seed=7,
    random_starts=40,
    keep_per_chart=160,
):
    """Chart-scanned reference solutions; same report shape as the solver."""
    mats = tuple(np.asarray(a, dtype=complex) for a in (a0, a1, a2))
    scale = sum(np.linalg.norm(a, 2) for a in mats)
    rng = np.random.default_rng(np.random.SeedSequence(seed))

    roots = []  # verified (lam canonical, x)
    for k in range(3):
        others = [i for i in range(3) if i != k]
        pts = _grid_points(span, grid)
        pencils = (
            mats[k][None, :, :]
            + pts[:, 0, None, None] * mats[others[0]][None, :, :]
            + pts[:, 1, None, None] * mats[others[1]][None, :, :]
        )
        smin = np.linalg.svd(pencils, compute_uv=False)[:, -1]
        order = np.argsort(smin)[:keep_per_chart]
        starts = [pts[i] for i in order]
        ra = rng.standard_normal((random_starts, 2)) * span
        rb = rng.standard_normal((random_starts, 2)) * span
        starts.extend(ra + 1j * rb)
        for pair in starts:
            hit = _refine(mats, k, np.asarray(pair, dtype=complex), scale, refine_iters)
            if hit is None:
                continue
            lam, x = hit
            nl = np.linalg.norm(lam)
            if nl == 0:
                continue
            rep = verify_solution(mats, lam, x, tol)
            if not rep["passed"]:
                continue
            lam_c = canonicalize(lam)
            if any(projective_distance(lam_c, l0) < 1e-7 for l0, _ in roots):
                continue
            roots.append((lam_c, canonicalize(x)))

    # fold eigenvalue families: one entry per eigenvector direction
    isolated, families = [], []
    for lam_c, x in roots:
        w = np.column_stack([a @ x for a in mats])
        lam_space = nullspace(w, tol)
        if lam_space.shape[1] <= 1:
            rep = verify_solution(mats, lam_c, x, tol)
            isolated.append(
                Solution(
                    lam=lam_c,
                    x=x,
                    residual=rep["residual"],
                    sigma_min_ratio=rep["sigma_min_ratio"],
                    decomposable=False,
                    continuum=False,
                )
            )
        else:
            if any(projective_distance(x, f.x) < 1e-6 for f in families):
                continue
            rep = verify_solution(mats, lam_c, x, tol)
            families.append(
                Solution(
                    lam=lam_c,
                    x=x,
                    residual=rep["residual"],
                    sigma_min_ratio=rep["sigma_min_ratio"],
                    decomposable=False,
                    continuum=True,
                    lam_family=lam_space,
                )
            )
    solutions = families + isolated
    solutions.sort(
        key=lambda s: (
            not s.continuum,
            tuple(np.round(np.concatenate([s.lam.real, s.lam.imag]), 9)),
        )
    )
    return SolveReport(
        solutions=solutions,
        path="oracle",
        alpha_used=None,
        gamma_condition=None,
        config=SolverConfig(rank_tol=tol, residual_tol=tol, seed=seed),
        diagnostics={"grid": grid, "span": span, "charts": 3},
    )

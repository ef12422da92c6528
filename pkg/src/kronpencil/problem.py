"""Problem container, solver configuration and the package's exception types."""

from dataclasses import dataclass, field

import numpy as np


class UnsupportedShapeError(ValueError):
    """Raised when matrix shapes cannot be handled (e.g. fewer rows than columns)."""


class CommutationError(ValueError):
    """Raised when matrices passed to the joint eigensolver do not commute."""


class StaleEigenvalueError(RuntimeError):
    """Raised when an eigenvalue candidate has no null vector at the working
    tolerance, which signals a tolerance mismatch upstream."""


class InternalSolveError(RuntimeError):
    """Raised when the solver fails on an input for which a solution is
    guaranteed to exist (m = n + 1)."""


@dataclass(frozen=True)
class SolverConfig:
    """Tunable knobs shared by the solver pipeline.

    rank_tol        relative threshold on singular values for rank decisions
    residual_tol    acceptance threshold for residuals of emitted solutions
    seed            seed for every randomized subroutine (reproducible runs)
    trials          budget for nonsingular-combination and decomposability searches
    cond_threshold  condition-number bound for accepting a matrix combination
    """

    rank_tol: float = 1e-8
    residual_tol: float = 1e-8
    seed: int = 1729
    trials: int = 64
    cond_threshold: float = 1e10

    def __post_init__(self):
        if not 0.0 < self.rank_tol < 1.0:
            raise ValueError("rank_tol must lie in (0, 1)")
        if not 0.0 < self.residual_tol < 1.0:
            raise ValueError("residual_tol must lie in (0, 1)")
        if self.trials < 1:
            raise ValueError("trials must be positive")


@dataclass
class PencilProblem:
    """Triple of m-by-n complex matrices with m > n.

    ``normalized`` records that the stacked matrix [A0; A1; A2] has full
    column rank and the concatenation [A0 A1 A2] has full row rank at the
    tolerance used during normalization.
    """

    a0: np.ndarray
    a1: np.ndarray
    a2: np.ndarray
    normalized: bool = False
    diagnostics: dict = field(default_factory=dict)

    def __post_init__(self):
        self.a0 = np.asarray(self.a0, dtype=complex)
        self.a1 = np.asarray(self.a1, dtype=complex)
        self.a2 = np.asarray(self.a2, dtype=complex)
        if not (self.a0.shape == self.a1.shape == self.a2.shape):
            raise ValueError("the three matrices must share one shape")
        if self.a0.ndim != 2:
            raise ValueError("matrix inputs must be two-dimensional")
        m, n = self.a0.shape
        if n < 1:
            raise UnsupportedShapeError("need at least one column")
        if m <= n:
            raise UnsupportedShapeError(f"need more rows than columns, got {m}x{n}")

    @property
    def m(self):
        return self.a0.shape[0]

    @property
    def n(self):
        return self.a0.shape[1]

    @property
    def matrices(self):
        return (self.a0, self.a1, self.a2)

    def pencil(self, lam):
        """Evaluate lam[0]*A0 + lam[1]*A1 + lam[2]*A2."""
        lam = np.asarray(lam, dtype=complex)
        return lam[0] * self.a0 + lam[1] * self.a1 + lam[2] * self.a2

    def scale(self, lam=None):
        """Natural residual scale: sum of |lam_i| * ||A_i||_2 (lam omitted: all ones)."""
        norms = [np.linalg.norm(a, 2) for a in self.matrices]
        if lam is None:
            return sum(norms)
        lam = np.asarray(lam, dtype=complex)
        return float(sum(abs(li) * ni for li, ni in zip(lam, norms)))

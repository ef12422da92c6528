"""Two-parameter rectangular matrix pencil solver.

Find all projective eigenvalues lam in C^3 and eigenvectors x with
(lam0*A0 + lam1*A1 + lam2*A2) x = 0 for complex m-by-n matrices with m > n,
through deflated Kronecker-determinant pencils with verified residuals.
"""

from .driver import Solution, SolveReport, solve, verify_inflated, verify_solution
from .kernels import COMPILED
from .linalg import (
    canonicalize,
    decomposable_in_span,
    normalize_problem,
    nullspace,
    numerical_rank,
    projective_distance,
    symmetric_rank_one_factor,
)
from .operators import (
    DeterminantTriple,
    block_antidiagonalize,
    block_diagonalize_anti,
    kron_anticommutator,
    kron_commutator,
    kronecker_determinants,
    pencil_commutators,
)
from .oracle import brute_force_solutions
from .problem import (
    CommutationError,
    InternalSolveError,
    PencilProblem,
    SolverConfig,
    StaleEigenvalueError,
    UnsupportedShapeError,
)
from .solvers import (
    OneParamSolution,
    commuting_joint_eigs,
    find_nonsingular_combination,
    simultaneous_deflated_solutions,
    solve_rect_pencil,
)
from .structure import (
    StrictPairIndex,
    commutation_matrix,
    orthogonal_transform,
    projectors,
    scaled_compressors,
    selection_matrices,
    unvec,
    vec,
)

__version__ = "0.1.0"

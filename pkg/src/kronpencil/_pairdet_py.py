"""Pure-Python (numpy) kernel for deflated pair-determinant assembly.

Mirrors the compiled kernel entry for entry: same compressed indexing, same
fixed summation order per output entry, so the two kernels produce identical
floating-point results.
"""

import numpy as np

from .structure import strict_pairs


def pair_determinant(a, b):
    m, n = a.shape
    row_pairs = strict_pairs(m)
    if row_pairs:
        p_idx = np.array([p for p, _ in row_pairs])
        q_idx = np.array([q for _, q in row_pairs])
    else:
        p_idx = q_idx = np.array([], dtype=int)
    ap, aq = a[p_idx, :], a[q_idx, :]
    bp, bq = b[p_idx, :], b[q_idx, :]

    diag = 2.0 * (aq * bp - ap * bq)

    col_pairs = strict_pairs(n)
    if col_pairs:
        i_idx = np.array([i for i, _ in col_pairs])
        j_idx = np.array([j for _, j in col_pairs])
        low = 2.0 * (
            ((aq[:, j_idx] * bp[:, i_idx] + aq[:, i_idx] * bp[:, j_idx])
             - ap[:, j_idx] * bq[:, i_idx]) - ap[:, i_idx] * bq[:, j_idx]
        )
    else:
        low = np.empty((len(row_pairs), 0), dtype=complex)
    return np.concatenate([diag, low], axis=1)

# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernel for deflated pair-determinant assembly.

Evaluates the row/column compressed antisymmetrized Kronecker product of two
m-by-n matrices entry by entry, without ever materializing the m^2-by-n^2
product.  Row r runs over strict row pairs (p, q), q < p, column by column;
the first n output columns are the diagonal picks (i, i), the remaining
n(n-1)/2 are strict column pairs (i, j), j < i, in the same ordering.

The summation order per entry is fixed and must match the pure-Python
fallback exactly.
"""

import numpy as np


def pair_determinant(const double complex[:, ::1] a, const double complex[:, ::1] b):
    cdef Py_ssize_t m = a.shape[0]
    cdef Py_ssize_t n = a.shape[1]
    cdef Py_ssize_t mt = m * (m - 1) // 2
    cdef Py_ssize_t nt = n * (n + 1) // 2
    out_arr = np.empty((mt, nt), dtype=np.complex128)
    cdef double complex[:, ::1] out = out_arr
    cdef Py_ssize_t p, q, i, j, r, c
    cdef double complex s

    r = 0
    for q in range(m - 1):
        for p in range(q + 1, m):
            for i in range(n):
                s = a[q, i] * b[p, i] - a[p, i] * b[q, i]
                out[r, i] = 2.0 * s
            c = n
            for j in range(n - 1):
                for i in range(j + 1, n):
                    s = ((a[q, j] * b[p, i] + a[q, i] * b[p, j])
                         - a[p, j] * b[q, i]) - a[p, i] * b[q, j]
                    out[r, c] = 2.0 * s
                    c += 1
            r += 1
    return out_arr

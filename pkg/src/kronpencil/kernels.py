"""Kernel selection: compiled extension when importable, numpy fallback otherwise.

Both kernels evaluate every entry with one fixed summation order and are
deterministic run to run; they agree with each other to a couple of ulps
(numpy's vectorized complex multiply may fuse operations internally).

Set KRONPENCIL_FORCE_PURE=1 to force the fallback (used by the benchmark and
the kernel-agreement tests).
"""

import os

import numpy as np

from . import _pairdet_py

if os.environ.get("KRONPENCIL_FORCE_PURE", "") == "1":
    _impl = _pairdet_py
    COMPILED = False
else:
    try:
        from . import _pairdet as _impl
        COMPILED = True
    except ImportError:
        _impl = _pairdet_py
        COMPILED = False


def pair_determinant(a, b):
    """Deflated determinant of the ordered pair (a, b).

    Returns the m(m-1)/2 by n(n+1)/2 compression of 2*(a kron b) onto strict
    row pairs and symmetric column coordinates, equal to the skew-compressed
    commutator of the pair under the integer row/column scaling.
    """
    a = np.ascontiguousarray(a, dtype=complex)
    b = np.ascontiguousarray(b, dtype=complex)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    if a.ndim != 2:
        raise ValueError("pair_determinant expects matrices")
    return _impl.pair_determinant(a, b)

"""Scan kernel selection: compiled Cython if built, NumPy otherwise."""

from __future__ import annotations

import numpy as np

from . import _scan_py

try:
    from . import _scan as _compiled
except ImportError:
    _compiled = None

HAVE_COMPILED = _compiled is not None


def first_hit(alphas, tol: float, start: int, stop: int) -> int:
    """Smallest integer a in [start, stop) with dist(a*alpha_j, Z) < tol for all j.

    Returns -1 when the range is exhausted.  An empty alpha list matches
    immediately.
    """
    arr = np.ascontiguousarray(alphas, dtype=np.float64)
    start = max(1, int(start))
    stop = int(stop)
    if start >= stop:
        return -1
    if arr.size == 0:
        return start
    if _compiled is not None:
        return int(_compiled.first_hit(arr, float(tol), start, stop))
    return int(_scan_py.first_hit(arr, float(tol), start, stop))


numpy_first_hit = _scan_py.first_hit
compiled_first_hit = _compiled.first_hit if _compiled is not None else None

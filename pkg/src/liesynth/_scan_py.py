"""NumPy fallback for the simultaneous-approximation scan.

Chunked and vectorised; the candidate*alpha products are compensated with a
Dekker two-product so fractional parts stay trustworthy for candidates up
to ~1e9.
"""

from __future__ import annotations

import numpy as np

_CHUNK = 1 << 20
_SPLITTER = 134217729.0  # 2**27 + 1, Veltkamp split constant


def _dist_to_int(a: np.ndarray, alpha: float) -> np.ndarray:
    p = a * alpha
    a_big = a * _SPLITTER
    a_hi = a_big - (a_big - a)
    a_lo = a - a_hi
    b_big = alpha * _SPLITTER
    b_hi = b_big - (b_big - alpha)
    b_lo = alpha - b_hi
    err = ((a_hi * b_hi - p) + a_hi * b_lo + a_lo * b_hi) + a_lo * b_lo
    q = (p - np.rint(p)) + err
    return np.abs(q - np.rint(q))


def first_hit(alphas, tol: float, start: int, stop: int) -> int:
    """Smallest a in [start, stop) with dist(a*alpha_j, Z) < tol for all j, else -1."""
    alphas = np.asarray(alphas, dtype=np.float64)
    start = max(1, int(start))
    stop = int(stop)
    lo = start
    while lo < stop:
        hi = min(lo + _CHUNK, stop)
        cand = np.arange(lo, hi, dtype=np.float64)
        ok = np.ones(cand.shape, dtype=bool)
        for alpha in alphas:
            ok &= _dist_to_int(cand, float(alpha)) < tol
            if not ok.any():
                break
        hits = np.nonzero(ok)[0]
        if hits.size:
            return lo + int(hits[0])
        lo = hi
    return -1

# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled kernel for the exhaustive simultaneous-approximation scan.

Finds the smallest integer a with every a*alpha_j within tol of an integer.
The product a*alpha_j is compensated with an fma so the fractional part
stays accurate out to a ~ 1e9 even when tol is near 1e-9.
"""

from libc.math cimport fabs, fma, nearbyint


def first_hit(double[::1] alphas, double tol, long long start, long long stop):
    """Smallest a in [start, stop) with dist(a*alpha_j, Z) < tol for all j, else -1."""
    cdef long long a
    cdef Py_ssize_t j, m = alphas.shape[0]
    cdef double x, p, e, q, d
    cdef bint ok
    if start < 1:
        start = 1
    for a in range(start, stop):
        x = <double> a
        ok = True
        for j in range(m):
            p = x * alphas[j]
            e = fma(x, alphas[j], -p)
            q = (p - nearbyint(p)) + e
            d = fabs(q - nearbyint(q))
            if d >= tol:
                ok = False
                break
        if ok:
            return a
    return -1

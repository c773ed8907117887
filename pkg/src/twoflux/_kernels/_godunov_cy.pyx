# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled Godunov face-flux kernel.

Scalar loop over faces with binary search into the breakpoint array and a
linear scan over the (typically tiny) range of interior breakpoints.  The
arithmetic matches the numpy fallback expression for expression, so both
kernels return identical bits.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()


cdef class FluxTable:
    cdef double[::1] bp
    cdef double[::1] val
    cdef double[::1] slopes
    cdef Py_ssize_t n

    def __init__(self, breakpoints, values):
        self.bp = np.ascontiguousarray(breakpoints, dtype=np.float64)
        self.val = np.ascontiguousarray(values, dtype=np.float64)
        self.slopes = np.ascontiguousarray(
            np.diff(values) / np.diff(breakpoints), dtype=np.float64
        )
        self.n = self.bp.shape[0]


def make_flux_table(breakpoints, values):
    return FluxTable(np.asarray(breakpoints), np.asarray(values))


cdef inline Py_ssize_t _bisect_right(double[::1] a, double x, Py_ssize_t n) noexcept nogil:
    cdef Py_ssize_t lo = 0, hi = n, mid
    while lo < hi:
        mid = (lo + hi) >> 1
        if x < a[mid]:
            hi = mid
        else:
            lo = mid + 1
    return lo


cdef inline Py_ssize_t _bisect_left(double[::1] a, double x, Py_ssize_t n) noexcept nogil:
    cdef Py_ssize_t lo = 0, hi = n, mid
    while lo < hi:
        mid = (lo + hi) >> 1
        if a[mid] < x:
            lo = mid + 1
        else:
            hi = mid
    return lo


cdef inline double _godunov_one(FluxTable t, double u, double v) noexcept nogil:
    cdef double a, b, qa, qb, mn, mx, w
    cdef Py_ssize_t k, i0, i1, i
    if u <= v:
        a = u
        b = v
    else:
        a = v
        b = u
    k = _bisect_right(t.bp, a, t.n) - 1
    if k < 0:
        k = 0
    elif k > t.n - 2:
        k = t.n - 2
    qa = t.val[k] + t.slopes[k] * (a - t.bp[k])
    k = _bisect_right(t.bp, b, t.n) - 1
    if k < 0:
        k = 0
    elif k > t.n - 2:
        k = t.n - 2
    qb = t.val[k] + t.slopes[k] * (b - t.bp[k])
    if qa <= qb:
        mn = qa
        mx = qb
    else:
        mn = qb
        mx = qa
    i0 = _bisect_right(t.bp, a, t.n)
    i1 = _bisect_left(t.bp, b, t.n) - 1
    for i in range(i0, i1 + 1):
        w = t.val[i]
        if w < mn:
            mn = w
        elif w > mx:
            mx = w
    if u <= v:
        return mn
    return mx


def face_fluxes_pwl(double[::1] U, Py_ssize_t split, FluxTable gtab, FluxTable ftab,
                    out=None):
    """Godunov flux at each face i between cells i and i+1; faces i < split use g."""
    cdef Py_ssize_t m = U.shape[0] - 1
    if out is None:
        out = np.empty(m)
    cdef double[::1] h = out
    cdef Py_ssize_t i
    if split < 0:
        split = 0
    elif split > m:
        split = m
    with nogil:
        for i in range(split):
            h[i] = _godunov_one(gtab, U[i], U[i + 1])
        for i in range(split, m):
            h[i] = _godunov_one(ftab, U[i], U[i + 1])
    return out

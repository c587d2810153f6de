# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled scan kernels: same contract as the NumPy fallback.

The geodesic distances of all three geometries are monotone functions of a
squared pre-metric (squared chord, or Minkowski square of the difference),
so the scans compare pre-metrics and apply the arc transform only to the
reduced value.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport asin, asinh, sqrt

BACKEND = "native"


cdef inline double _sq(const double* a, const double* b, Py_ssize_t d,
                       int kind) noexcept nogil:
    cdef Py_ssize_t k
    cdef double acc, diff
    if kind == 2:
        # Minkowski square of the difference, time component first
        diff = a[0] - b[0]
        acc = -diff * diff
        for k in range(1, d):
            diff = a[k] - b[k]
            acc += diff * diff
        if acc < 0.0:
            acc = 0.0
        return acc
    acc = 0.0
    for k in range(d):
        diff = a[k] - b[k]
        acc += diff * diff
    return acc


cdef inline double _finish(double sq, int kind, double scale) noexcept nogil:
    cdef double ratio
    if kind == 0:
        return sqrt(sq)
    if kind == 1:
        ratio = sqrt(sq) / (2.0 * scale)
        if ratio > 1.0:
            ratio = 1.0
        return 2.0 * scale * asin(ratio)
    return 2.0 * scale * asinh(sqrt(sq) / (2.0 * scale))


def pairwise_max(points, int kind, double scale=1.0):
    cdef cnp.ndarray[double, ndim=2, mode="c"] pts = np.ascontiguousarray(
        points, dtype=np.float64)
    cdef Py_ssize_t n = pts.shape[0]
    cdef Py_ssize_t d = pts.shape[1]
    if n < 2:
        return 0.0, 0, 0
    cdef double best = -1.0
    cdef Py_ssize_t bi = 0, bj = 0, i, j
    cdef double sq
    cdef const double* base = &pts[0, 0]
    with nogil:
        for i in range(n - 1):
            for j in range(i + 1, n):
                sq = _sq(base + i * d, base + j * d, d, kind)
                if sq > best:
                    best = sq
                    bi = i
                    bj = j
    return _finish(best, kind, scale), int(bi), int(bj)


def min_dist_to(points, targets, int kind, double scale=1.0):
    cdef cnp.ndarray[double, ndim=2, mode="c"] pts = np.ascontiguousarray(
        points, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=2, mode="c"] tgt = np.ascontiguousarray(
        targets, dtype=np.float64)
    cdef Py_ssize_t n = pts.shape[0]
    cdef Py_ssize_t m = tgt.shape[0]
    cdef Py_ssize_t d = pts.shape[1]
    if tgt.shape[1] != d:
        raise ValueError("point dimensions disagree")
    cdef cnp.ndarray[double, ndim=1] out = np.empty(n, dtype=np.float64)
    cdef Py_ssize_t i, j
    cdef double lo, sq
    cdef const double* pbase
    cdef const double* tbase
    if m == 0:
        out[:] = np.inf
        return out
    pbase = &pts[0, 0]
    tbase = &tgt[0, 0]
    with nogil:
        for i in range(n):
            lo = _sq(pbase + i * d, tbase, d, kind)
            for j in range(1, m):
                sq = _sq(pbase + i * d, tbase + j * d, d, kind)
                if sq < lo:
                    lo = sq
            out[i] = _finish(lo, kind, scale)
    return out

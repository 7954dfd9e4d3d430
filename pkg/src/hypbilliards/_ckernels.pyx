# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops; behaviour mirrors ``_pykernels``."""

import math

import numpy as np
cimport numpy as cnp
from libc.math cimport asinh, cosh, sinh, sqrt, fabs

from ._pykernels import CuspEscape

cnp.import_array()

cdef double INV_PHI = 0.6180339887498949
cdef double T_ESCAPE = 60.0


cdef inline void _point(double[:, ::1] F, double[:, ::1] D, Py_ssize_t j,
                        double t, double* out) nogil:
    cdef double c = cosh(t)
    cdef double s = sinh(t)
    out[0] = c * F[j, 0] + s * D[j, 0]
    out[1] = c * F[j, 1] + s * D[j, 1]
    out[2] = c * F[j, 2] + s * D[j, 2]


cdef inline double _dist(double* p, double* q) nogil:
    cdef double d0 = p[0] - q[0]
    cdef double d1 = p[1] - q[1]
    cdef double d2 = p[2] - q[2]
    cdef double quad = d1 * d1 + d2 * d2 - d0 * d0
    if quad < 0.0:
        quad = 0.0
    return 2.0 * asinh(0.5 * sqrt(quad))


cdef inline double _g(double[:, ::1] F, double[:, ::1] D, Py_ssize_t j,
                      double s, double* prev, double* nxt) nogil:
    cdef double p[3]
    _point(F, D, j, s, p)
    return _dist(prev, p) + _dist(p, nxt)


cdef double _fsum_cycle(double[:, ::1] pts, Py_ssize_t n):
    cdef Py_ssize_t j
    terms = []
    for j in range(n):
        terms.append(_dist(&pts[j, 0], &pts[(j + 1) % n, 0]))
    return math.fsum(terms)


def cyclic_length(F, D, t):
    cdef double[:, ::1] Fv = np.ascontiguousarray(F, dtype=np.float64)
    cdef double[:, ::1] Dv = np.ascontiguousarray(D, dtype=np.float64)
    cdef double[::1] tv = np.ascontiguousarray(t, dtype=np.float64)
    cdef Py_ssize_t n = tv.shape[0]
    cdef double[:, ::1] pts = np.empty((n, 3))
    cdef Py_ssize_t j
    for j in range(n):
        _point(Fv, Dv, j, tv[j], &pts[j, 0])
    return _fsum_cycle(pts, n)


cdef int _line_search(double[:, ::1] F, double[:, ::1] D, Py_ssize_t j,
                      double s0, double f0, double h, double* prev, double* nxt,
                      double tol, double* s_out, double* f_out) nogil:
    cdef double a, fa, b, fb, mid, fmid, c, fc, d, fd, best, fbest
    a = s0 - h
    fa = _g(F, D, j, a, prev, nxt)
    b = s0 + h
    fb = _g(F, D, j, b, prev, nxt)
    mid = s0
    fmid = f0
    while fa < fmid:
        h *= 2.0
        b = mid; fb = fmid
        mid = a; fmid = fa
        a = mid - h
        if a < -T_ESCAPE:
            return -1
        fa = _g(F, D, j, a, prev, nxt)
    while fb < fmid:
        h *= 2.0
        a = mid; fa = fmid
        mid = b; fmid = fb
        b = mid + h
        if b > T_ESCAPE:
            return -1
        fb = _g(F, D, j, b, prev, nxt)

    best = mid
    fbest = fmid
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc = _g(F, D, j, c, prev, nxt)
    fd = _g(F, D, j, d, prev, nxt)
    while b - a > tol:
        if fc < fd:
            b = d; d = c; fd = fc
            c = b - INV_PHI * (b - a)
            fc = _g(F, D, j, c, prev, nxt)
        else:
            a = c; c = d; fc = fd
            d = a + INV_PHI * (b - a)
            fd = _g(F, D, j, d, prev, nxt)
        if fc < fbest:
            best = c; fbest = fc
        if fd < fbest:
            best = d; fbest = fd
    s_out[0] = best
    f_out[0] = fbest
    return 0


def coordinate_descent(F, D, t0, double tol=1e-12, long max_sweeps=100_000):
    cdef double[:, ::1] Fv = np.ascontiguousarray(F, dtype=np.float64)
    cdef double[:, ::1] Dv = np.ascontiguousarray(D, dtype=np.float64)
    t_arr = np.array(t0, dtype=np.float64)
    cdef double[::1] t = t_arr
    cdef Py_ssize_t n = t.shape[0]
    cdef double[:, ::1] pts = np.empty((n, 3))
    steps_arr = np.full(n, 0.5)
    cdef double[::1] steps = steps_arr
    cdef Py_ssize_t j
    cdef long sweeps = 0
    cdef bint converged = False
    cdef double biggest, s0, f0, s, fs, move
    cdef int status = 0

    for j in range(n):
        _point(Fv, Dv, j, t[j], &pts[j, 0])

    with nogil:
        while sweeps < max_sweeps:
            sweeps += 1
            biggest = 0.0
            for j in range(n):
                s0 = t[j]
                f0 = _g(Fv, Dv, j, s0, &pts[(j - 1 + n) % n, 0], &pts[(j + 1) % n, 0])
                status = _line_search(Fv, Dv, j, s0, f0, steps[j],
                                      &pts[(j - 1 + n) % n, 0], &pts[(j + 1) % n, 0],
                                      tol, &s, &fs)
                if status != 0:
                    break
                if fs < f0:
                    move = fabs(s - s0)
                    if move > biggest:
                        biggest = move
                    steps[j] = 4.0 * move if 4.0 * move > 1e-9 else 1e-9
                    t[j] = s
                    _point(Fv, Dv, j, s, &pts[j, 0])
                else:
                    steps[j] = 0.25 * steps[j] if 0.25 * steps[j] > 1e-9 else 1e-9
            if status != 0:
                break
            if biggest < tol:
                converged = True
                break
    if status != 0:
        raise CuspEscape("line search ran into a cusp")
    value = _fsum_cycle(pts, n)
    return t_arr, value, sweeps, bool(converged)

# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for products of tanh factors in log scale.

Twin of stripquad._kernels_py; see there for the contract.
"""

from libc.math cimport tanh, log, exp, fabs, INFINITY, pi

import numpy as np

NEGLIGIBLE_ARG = 22.0

cdef double _NEGLIGIBLE = 22.0


cdef inline double _two_log_tanh(double t) noexcept nogil:
    # 2*ln(tanh(t)) for t > 0; for t above 4 use
    # ln tanh t = -2*atanh(u) = -2*(u + u^3/3 + ...) with u = exp(-2t),
    # which costs one libm call instead of two (u^5 tail < 2e-18 there).
    cdef double u
    if t > 4.0:
        u = exp(-2.0 * t)
        return -4.0 * u * (1.0 + u * u * (1.0 / 3.0))
    return 2.0 * log(tanh(t))


cdef Py_ssize_t _lower_bound(const double[::1] a, double v) noexcept nogil:
    cdef Py_ssize_t lo = 0, hi = a.shape[0], mid
    while lo < hi:
        mid = (lo + hi) // 2
        if a[mid] < v:
            lo = mid + 1
        else:
            hi = mid
    return lo


cdef Py_ssize_t _upper_bound(const double[::1] a, double v) noexcept nogil:
    cdef Py_ssize_t lo = 0, hi = a.shape[0], mid
    while lo < hi:
        mid = (lo + hi) // 2
        if a[mid] <= v:
            lo = mid + 1
        else:
            hi = mid
    return lo


def fooling_log_sum(xs, nodes, double d):
    xs_arr = np.ascontiguousarray(xs, dtype=np.float64)
    nodes_arr = np.ascontiguousarray(nodes, dtype=np.float64)
    out = np.empty(xs_arr.shape, dtype=np.float64)
    cdef const double[::1] xv = xs_arr.ravel()
    cdef const double[::1] nv = nodes_arr
    cdef double[::1] ov = out.ravel()
    cdef double scale = pi / (4.0 * d)
    cdef double win = _NEGLIGIBLE / scale
    cdef Py_ssize_t k, i, lo, hi
    cdef double x, s, t
    with nogil:
        for k in range(xv.shape[0]):
            x = xv[k]
            lo = _lower_bound(nv, x - win)
            hi = _upper_bound(nv, x + win)
            s = 0.0
            for i in range(lo, hi):
                t = scale * fabs(x - nv[i])
                if t == 0.0:
                    s = -INFINITY
                    break
                s += _two_log_tanh(t)
            ov[k] = s
    return out


def pairwise_log_tanh(nodes, double d):
    nodes_arr = np.ascontiguousarray(nodes, dtype=np.float64)
    cdef const double[::1] nv = nodes_arr
    cdef Py_ssize_t n = nv.shape[0]
    left = np.zeros(n, dtype=np.float64)
    right = np.zeros(n, dtype=np.float64)
    cdef double[::1] lv = left
    cdef double[::1] rv = right
    cdef double scale = pi / (4.0 * d)
    cdef double win = _NEGLIGIBLE / scale
    cdef Py_ssize_t i, j
    cdef double s, t
    with nogil:
        for i in range(n):
            s = 0.0
            j = i - 1
            while j >= 0:
                t = scale * (nv[i] - nv[j])
                if t > win:
                    break
                s += _two_log_tanh(t)
                j -= 1
            lv[i] = s
            s = 0.0
            j = i + 1
            while j < n:
                t = scale * (nv[j] - nv[i])
                if t > win:
                    break
                s += _two_log_tanh(t)
                j += 1
            rv[i] = s
    return left, right

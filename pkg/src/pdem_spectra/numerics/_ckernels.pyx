# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled symmetric-tridiagonal kernels (mirrors _pykernels line by line)."""
import numpy as np
cimport numpy as cnp
from libc.math cimport fabs, fmax

cnp.import_array()


cdef Py_ssize_t _count(const double[::1] diag, const double[::1] off2,
                       double sigma, double pivmin) noexcept nogil:
    cdef Py_ssize_t i, n = diag.shape[0], c = 0
    cdef double p = diag[0] - sigma
    if fabs(p) < pivmin:
        p = -pivmin
    if p < 0:
        c += 1
    for i in range(1, n):
        p = diag[i] - sigma - off2[i - 1] / p
        if fabs(p) < pivmin:
            p = -pivmin
        if p < 0:
            c += 1
    return c


def sturm_count(const double[::1] diag, const double[::1] off2, double sigma, double pivmin):
    return _count(diag, off2, sigma, pivmin)


def bisect(const double[::1] diag, const double[::1] off2, Py_ssize_t index,
           double lo, double hi, double abs_tol, double rel_tol, double pivmin,
           int max_iter):
    cdef int it
    cdef bint done = False
    cdef double mid = 0.5 * (lo + hi)
    with nogil:
        for it in range(max_iter):
            if hi - lo <= fmax(abs_tol, rel_tol * fmax(fabs(lo), fabs(hi))):
                mid = 0.5 * (lo + hi)
                done = True
                break
            mid = 0.5 * (lo + hi)
            if mid <= lo or mid >= hi:
                done = True
                break
            if _count(diag, off2, mid, pivmin) > index:
                hi = mid
            else:
                lo = mid
        if not done:
            mid = 0.5 * (lo + hi)
    return mid, bool(done)


def solve_shifted(const double[::1] diag, const double[::1] off, double sigma,
                  const double[::1] rhs, double pivmin):
    cdef Py_ssize_t n = diag.shape[0], i
    cdef double fact, temp
    d_arr = np.empty(n)
    du_arr = np.zeros(n)
    dl_arr = np.zeros(n)
    b_arr = np.array(rhs, dtype=np.float64, copy=True)
    cdef double[::1] d = d_arr, du = du_arr, dl = dl_arr, b = b_arr
    with nogil:
        for i in range(n):
            d[i] = diag[i] - sigma
        for i in range(n - 1):
            du[i] = off[i]
            dl[i] = off[i]
        for i in range(n - 1):
            if fabs(d[i]) >= fabs(dl[i]):
                if fabs(d[i]) < pivmin:
                    d[i] = pivmin
                fact = dl[i] / d[i]
                d[i + 1] -= fact * du[i]
                b[i + 1] -= fact * b[i]
                dl[i] = 0.0
            else:
                fact = d[i] / dl[i]
                d[i] = dl[i]
                temp = d[i + 1]
                d[i + 1] = du[i] - fact * temp
                if i < n - 2:
                    dl[i] = du[i + 1]
                    du[i + 1] = -fact * dl[i]
                else:
                    dl[i] = 0.0
                du[i] = temp
                temp = b[i]
                b[i] = b[i + 1]
                b[i + 1] = temp - fact * b[i + 1]
        if fabs(d[n - 1]) < pivmin:
            d[n - 1] = pivmin
        b[n - 1] /= d[n - 1]
        if n > 1:
            b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) / d[n - 2]
        for i in range(n - 3, -1, -1):
            b[i] = (b[i] - du[i] * b[i + 1] - dl[i] * b[i + 2]) / d[i]
    return b_arr

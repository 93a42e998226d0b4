"""Pure-Python twins of the compiled tridiagonal kernels."""
import numpy as np


def _count(diag, off2, sigma, pivmin):
    c = 0
    p = diag[0] - sigma
    if abs(p) < pivmin:
        p = -pivmin
    if p < 0:
        c += 1
    for di, e2 in zip(diag[1:], off2):
        p = di - sigma - e2 / p
        if abs(p) < pivmin:
            p = -pivmin
        if p < 0:
            c += 1
    return c


def sturm_count(diag, off2, sigma, pivmin):
    return _count(np.asarray(diag).tolist(), np.asarray(off2).tolist(), float(sigma), pivmin)


def bisect(diag, off2, index, lo, hi, abs_tol, rel_tol, pivmin, max_iter):
    diag = np.asarray(diag).tolist()
    off2 = np.asarray(off2).tolist()
    for _ in range(max_iter):
        if hi - lo <= max(abs_tol, rel_tol * max(abs(lo), abs(hi))):
            return 0.5 * (lo + hi), True
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            return mid, True
        if _count(diag, off2, mid, pivmin) > index:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi), False


def solve_shifted(diag, off, sigma, rhs, pivmin):
    n = len(diag)
    d = [float(v) - sigma for v in diag]
    du = [float(v) for v in off] + [0.0]
    dl = list(du)
    b = [float(v) for v in rhs]
    for i in range(n - 1):
        if abs(d[i]) >= abs(dl[i]):
            if abs(d[i]) < pivmin:
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
    if abs(d[n - 1]) < pivmin:
        d[n - 1] = pivmin
    b[n - 1] /= d[n - 1]
    if n > 1:
        b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) / d[n - 2]
    for i in range(n - 3, -1, -1):
        b[i] = (b[i] - du[i] * b[i + 1] - dl[i] * b[i + 2]) / d[i]
    return np.array(b)

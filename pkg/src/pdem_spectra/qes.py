"""Polynomial solutions of the nonhypergeometric QES equation

    g^3 F'' + a (g^2 - xi^2) F' + (b g + c) F = 0,   b = -k (a + k - 1).

Inserting F = sum_j f_j g^j and collecting g^m gives, for m = 0..k,

    c f_m = -[(m-1)(m-2+a) + b] f_{m-1} + a xi^2 (m+1) f_{m+1},

so the admissible c are the eigenvalues of a (k+1)x(k+1) tridiagonal matrix.
The closing row m = k+1 vanishes identically because of the choice of b.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

REAL_TOL = 1e-9
GAP_TOL = 1e-9


@dataclass(frozen=True)
class QesLevel:
    c: float
    coeffs: np.ndarray  # ascending powers, coeffs[-1] == 1

    def poly(self) -> np.polynomial.Polynomial:
        return np.polynomial.Polynomial(self.coeffs)


@dataclass(frozen=True)
class QesSolution:
    k: int
    a: float
    xi: float
    levels: tuple[QesLevel, ...]

    @property
    def b(self) -> float:
        return qes_b(self.k, self.a)

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "a": self.a,
            "xi": self.xi,
            "b": self.b,
            "levels": [{"c": lv.c, "coeffs": lv.coeffs.tolist()} for lv in self.levels],
        }


def qes_b(k: int, a: float) -> float:
    return -k * (a + k - 1)


def _check(k, a, xi):
    if int(k) != k or k < 1:
        raise ValueError(f"QES degree k must be a positive integer, got {k}")
    if a == 0:
        raise ValueError("QES equation degenerates for a = 0 (need a != 0, b != 0)")
    if not xi > 0:
        raise ValueError(f"QES parameter xi must be positive, got {xi}")
    if qes_b(k, a) == 0:
        raise ValueError("QES equation degenerates for b = -k(a+k-1) = 0 (need a != 0, b != 0)")


def qes_matrix(k: int, a: float, xi: float) -> np.ndarray:
    """Tridiagonal T with T f = c f for the coefficient vector f of F."""
    _check(k, a, xi)
    b = qes_b(k, a)
    t = np.zeros((k + 1, k + 1))
    for m in range(k + 1):
        if m >= 1:
            t[m, m - 1] = -((m - 1) * (m - 2 + a) + b)
        if m < k:
            t[m, m + 1] = a * xi * xi * (m + 1)
    return t


def _eig(t: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigenpairs of the tridiagonal T, symmetrized by a diagonal similarity when possible."""
    upper, lower = np.diag(t, 1), np.diag(t, -1)
    prod = upper * lower
    if np.all(prod > 0):
        # D T D^-1 is symmetric for d_{m+1}/d_m = sqrt(upper_m / lower_m)
        ratios = np.sqrt(upper / lower)
        d = np.concatenate(([1.0], np.cumprod(ratios)))
        off = np.sign(upper) * np.sqrt(prod)
        s = np.diag(np.diag(t)) + np.diag(off, 1) + np.diag(off, -1)
        vals, vecs = np.linalg.eigh(s)
        return vals.astype(complex), (vecs / d[:, None]).astype(complex)
    return np.linalg.eig(t)


def qes_solve(k: int, a: float, xi: float) -> QesSolution:
    t = qes_matrix(k, a, xi)
    vals, vecs = _eig(t)
    scale = max(np.max(np.abs(vals)), np.finfo(float).tiny)
    if np.any(np.abs(vals.imag) > REAL_TOL * scale):
        raise ValueError("QES spectrum not simple/real for these parameters")
    order = np.argsort(vals.real)
    c = vals.real[order]
    if k >= 1 and np.any(np.diff(c) < GAP_TOL * scale):
        raise ValueError("QES spectrum not simple/real for these parameters")
    levels = []
    for j in order:
        v = vecs[:, j].real
        if v[-1] == 0:
            raise ValueError("QES spectrum not simple/real for these parameters")
        levels.append(QesLevel(float(vals[j].real), v / v[-1]))
    return QesSolution(int(k), float(a), float(xi), tuple(levels))


def qes_residual(solution: QesSolution, level: QesLevel, g) -> np.ndarray:
    """g^3 F'' + a (g^2 - xi^2) F' + (b g + c) F at the points g."""
    p = level.poly()
    a, xi = solution.a, solution.xi
    g = np.asarray(g, dtype=float)
    return (
        g**3 * p.deriv(2)(g)
        + a * (g * g - xi * xi) * p.deriv(1)(g)
        + (solution.b * g + level.c) * p(g)
    )

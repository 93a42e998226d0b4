"""Jacobi and generalized Laguerre polynomials by three-term recurrence.

Derivatives use the parameter-shift identities

    d/dg P_n^(a,b) = (n+a+b+1)/2 * P_{n-1}^(a+1,b+1)
    d/dg L_n^(a)   = -L_{n-1}^(a+1)

applied once for the first and twice for the second derivative.
"""
from __future__ import annotations

from typing import NamedTuple

import numpy as np


class PolyEval(NamedTuple):
    value: np.ndarray
    d1: np.ndarray
    d2: np.ndarray


def _check(*params):
    for p in params:
        if not p > -1:
            raise ValueError(f"polynomial parameter inadmissible: {p} (need > -1)")


def jacobi(n: int, a: float, b: float, g):
    """P_n^(a,b)(g); keeps the dtype of ``g`` (long double passes through)."""
    g = np.asarray(g)
    if n < 0:
        return np.zeros_like(g, dtype=np.result_type(g, float))
    p_prev = np.ones_like(g, dtype=np.result_type(g, float))
    if n == 0:
        return p_prev
    p = ((a + b + 2) * g + (a - b)) / 2
    for m in range(2, n + 1):
        s = 2 * m + a + b
        c0 = 2 * m * (m + a + b) * (s - 2)
        c1 = (s - 1) * (s * (s - 2) * g + a * a - b * b)
        c2 = 2 * (m + a - 1) * (m + b - 1) * s
        p, p_prev = (c1 * p - c2 * p_prev) / c0, p
    return p


def laguerre(n: int, a: float, g):
    """L_n^(a)(g); keeps the dtype of ``g``."""
    g = np.asarray(g)
    if n < 0:
        return np.zeros_like(g, dtype=np.result_type(g, float))
    l_prev = np.ones_like(g, dtype=np.result_type(g, float))
    if n == 0:
        return l_prev
    ell = 1 + a - g
    for m in range(2, n + 1):
        ell, l_prev = ((2 * m - 1 + a - g) * ell - (m - 1 + a) * l_prev) / m, ell
    return ell


def jacobi_eval(n: int, a: float, b: float, g) -> PolyEval:
    _check(a, b)
    value = jacobi(n, a, b, g)
    d1 = 0.5 * (n + a + b + 1) * jacobi(n - 1, a + 1, b + 1, g)
    d2 = 0.25 * (n + a + b + 1) * (n + a + b + 2) * jacobi(n - 2, a + 2, b + 2, g)
    return PolyEval(value, d1, d2)


def laguerre_eval(n: int, a: float, g) -> PolyEval:
    _check(a)
    return PolyEval(laguerre(n, a, g), -laguerre(n - 1, a + 1, g), laguerre(n - 2, a + 2, g))

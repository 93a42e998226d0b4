"""General point-canonical-transformation machinery for the PDEM equation.

The Schrodinger equation is written in the fixed ordering

    -(d/dx)(1/M)(d/dx) psi + V_eff psi = E psi        (hbar = 2 m0 = 1)

and solutions are sought as psi = f(x) F(g(x)) with F obeying
F'' + Q(g) F' + R(g) F = 0.  Everything here is evaluated from closed-form
derivatives supplied by the caller; nothing is differenced numerically.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

Fn = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class AmbiguityParams:
    """von Roos ordering parameters with alpha + beta + gamma = -1."""

    alpha: float
    beta: float
    gamma: float | None = None

    def __post_init__(self):
        gamma = -1.0 - self.alpha - self.beta
        if self.gamma is not None and not math.isclose(self.gamma, gamma, abs_tol=1e-12):
            raise ValueError(
                f"ambiguity parameters must satisfy alpha + beta + gamma = -1, got gamma={self.gamma}"
            )
        object.__setattr__(self, "gamma", gamma)


BEN_DANIEL_DUKE = AmbiguityParams(0.0, -1.0)
ZHU_KROEMER = AmbiguityParams(-0.5, 0.0)


def shift_coefficients(amb: AmbiguityParams) -> tuple[float, float]:
    """The (f, g) pair of the closed-form V - V_eff relations for the catalog masses.

    For M = sech^2(qx): V = V_eff + q^2 (f cosh^2 qx - g); for M = exp(-qx):
    V = V_eff + q^2 f exp(qx) / 4.
    """
    a, b = amb.alpha, amb.beta
    return (2 * a + 1) * (2 * a + 2 * b + 2) - 2 * a, (2 * a + 1) ** 2 + b * (4 * a + 1)


@dataclass(frozen=True)
class MassProfile:
    value: Fn
    d1: Fn
    d2: Fn
    log_value: Fn
    domain: tuple[float, float] = (-math.inf, math.inf)

    def check(self, x):
        x = np.asarray(x)
        lo, hi = self.domain
        if not np.all(np.isfinite(x)) or np.any(x <= lo) or np.any(x >= hi):
            raise ValueError("x outside family domain")
        return x


@dataclass(frozen=True)
class PctData:
    """Change of variable g(x) with closed-form derivatives, plus Q, Q', R of the F equation."""

    g: Fn
    g1: Fn
    g2: Fn
    g3: Fn
    Q: Fn
    Qdot: Fn
    R: Fn
    nu: float = field(default=0.0)


def _pct_setup(pct: PctData, mass: MassProfile, x):
    x = mass.check(x)
    g1 = pct.g1(x)
    if np.any(g1 == 0):
        raise ValueError("change of variable degenerate")
    return x, g1


def prefactor_log_derivative(pct: PctData, mass: MassProfile, x):
    """f'/f for f = (M/g')^(1/2) exp(1/2 int^g Q)."""
    x, g1 = _pct_setup(pct, mass, x)
    m = mass.value(x)
    return 0.5 * (mass.d1(x) / m - pct.g2(x) / g1) + 0.5 * pct.Q(pct.g(x)) * g1


def pct_rhs(pct: PctData, mass: MassProfile, x):
    """Right-hand side of the transformed equation; equals E - V_eff(x) for a true level."""
    x, g1 = _pct_setup(pct, mass, x)
    m, m1, m2 = mass.value(x), mass.d1(x), mass.d2(x)
    g = pct.g(x)
    g2, g3 = pct.g2(x), pct.g3(x)
    q_ = pct.Q(g)
    invariant = pct.R(g) - 0.5 * pct.Qdot(g) - 0.25 * q_ * q_
    return (
        g3 / (2 * m * g1)
        - 0.75 / m * (g2 / g1) ** 2
        + g1 * g1 / m * invariant
        - m2 / (2 * m * m)
        + 0.75 * m1 * m1 / m**3
    )


def ambiguity_shift(mass: MassProfile, amb: AmbiguityParams, x):
    """V_eff(x) - V(x) produced by the ordering parameters."""
    x = mass.check(x)
    m, m1, m2 = mass.value(x), mass.d1(x), mass.d2(x)
    a, b = amb.alpha, amb.beta
    return 0.5 * (b + 1) * m2 / (m * m) - (a * (a + b + 1) + b + 1) * m1 * m1 / m**3


@dataclass(frozen=True)
class BoundaryProbe:
    n_points: int = 8
    ratio: float = 2.0
    start: float = 5.0  # in units of 1/q
    threshold: float = 1e-8

    def points(self, q: float) -> np.ndarray:
        return self.start / q * self.ratio ** np.arange(self.n_points)


def boundary_condition_ok(family, n: int, probe: BoundaryProbe | None = None) -> bool:
    """Check |psi_n|^2 / sqrt(M) -> 0 at both ends of the real line.

    ``family`` needs ``q``, ``mass.log_value``, ``log_abs_psi(n, x)`` and
    ``level(n).norm``.  The test is done on logarithms so that probe points far
    in the tails neither overflow nor underflow.
    """
    probe = probe or BoundaryProbe()
    try:
        log_norm = math.log(family.level(n).norm)
    except (ValueError, ArithmeticError):
        return False
    if not math.isfinite(log_norm):
        return False
    log_thr = math.log(probe.threshold)
    pts = probe.points(family.q)
    for side in (-pts, pts):
        with np.errstate(all="ignore"):
            logs = (
                2 * family.log_abs_psi(n, side)
                - 0.5 * family.mass.log_value(side)
                - 2 * log_norm
            )
        logs = np.asarray(logs, dtype=float)
        if np.any(np.isnan(logs)) or np.any(logs == np.inf):
            return False
        # an underflowed (-inf) sample counts as "very small", not as missing
        logs = np.where(logs == -np.inf, -1e300, logs)
        if np.any(np.diff(logs) > 1e-12 * np.abs(logs[:-1])):
            return False
        if not logs[-1] < log_thr:
            return False
    return True

"""Finite-difference oracle for -(d/dx)(1/M)(d/dx) psi + V psi = E psi.

The operator is discretized in flux form on a uniform grid, which gives a
symmetric tridiagonal matrix.  Ends where the wavefunction decays only
exponentially get a Robin closure psi' = kappa psi with kappa the known tail
exponent (half-cell row, lumped weight h/2, symmetrized by sqrt(2) on the
coupling); ends with faster-than-exponential decay are plain Dirichlet.
Eigenvalues come from Sturm-sequence bisection, eigenvectors from inverse
iteration, both in the kernel backend chosen in :mod:`.kernels`.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass, field

import numpy as np

from ..pct import MassProfile, boundary_condition_ok
from . import kernels

EPS = np.finfo(float).eps
BISECT_ABS_TOL = 1e-13
BISECT_MAX_ITER = 200
INVERSE_STEPS = 3


@dataclass(frozen=True)
class Grid:
    x_min: float
    x_max: float
    n_points: int = 4001

    def __post_init__(self):
        if not self.x_min < self.x_max:
            raise ValueError(f"grid needs x_min < x_max, got [{self.x_min}, {self.x_max}]")
        if self.n_points < 3:
            raise ValueError(f"grid needs at least 3 points, got {self.n_points}")

    @property
    def h(self) -> float:
        return (self.x_max - self.x_min) / (self.n_points - 1)

    @property
    def x(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.n_points)

    def refined(self) -> "Grid":
        """Same window with h halved."""
        return Grid(self.x_min, self.x_max, 2 * self.n_points - 1)

    def to_dict(self) -> dict:
        return {"x_min": self.x_min, "x_max": self.x_max, "n_points": self.n_points, "h": self.h}


def default_grid(system, n_points: int = 4001) -> Grid:
    lo, hi = system.default_grid_bounds()
    return Grid(lo, hi, n_points)


@dataclass(frozen=True)
class DiscretizedHamiltonian:
    diag: np.ndarray
    offdiag: np.ndarray
    grid: Grid
    first: int  # grid index of the first unknown
    weights: np.ndarray  # lumped quadrature weight of each unknown
    boundary: tuple[str, str]

    @property
    def size(self) -> int:
        return self.diag.size

    @property
    def x(self) -> np.ndarray:
        return self.grid.x[self.first : self.first + self.size]

    def norm_estimate(self) -> float:
        """Gershgorin bound on the spectral radius."""
        e = np.abs(self.offdiag)
        rad = np.zeros_like(self.diag)
        rad[:-1] += e
        rad[1:] += e
        return float(np.max(np.abs(self.diag) + rad))

    def to_dense(self) -> np.ndarray:
        return np.diag(self.diag) + np.diag(self.offdiag, 1) + np.diag(self.offdiag, -1)

    def to_function(self, vector: np.ndarray) -> np.ndarray:
        """Matrix eigenvector -> grid samples of psi normalized with the lumped weights."""
        return vector / np.sqrt(self.weights)


@dataclass(frozen=True)
class SimpleSystem:
    """A bare (mass, potential) pair for harness checks."""

    mass: MassProfile
    potential: object
    tails: tuple = (None, None)

    def veff(self, x):
        return self.potential(np.asarray(x))


def constant_mass(value: float = 1.0) -> MassProfile:
    return MassProfile(
        value=lambda x: np.full_like(np.asarray(x, dtype=float), value),
        d1=lambda x: np.zeros_like(np.asarray(x, dtype=float)),
        d2=lambda x: np.zeros_like(np.asarray(x, dtype=float)),
        log_value=lambda x: np.full_like(np.asarray(x, dtype=float), math.log(value)),
    )


def discretize(system, grid: Grid, boundary: str = "auto") -> DiscretizedHamiltonian:
    """Symmetric tridiagonal H for ``system`` (needs ``mass``, ``veff``, ``tails``).

    ``boundary="auto"`` uses a Robin closure at ends with a finite tail
    exponent, ``"dirichlet"`` forces Dirichlet at both ends.
    """
    x = grid.x
    h = grid.h
    system.mass.check(x)
    mass_nodes = system.mass.value(x)
    mass_mid = system.mass.value(0.5 * (x[:-1] + x[1:]))
    if not (np.all(mass_nodes > 0) and np.all(mass_mid > 0)):
        raise ValueError("mass not positive on grid")
    w_mid = 1.0 / mass_mid
    w_node = 1.0 / mass_nodes
    pot = np.asarray(system.veff(x), dtype=float)

    if boundary == "dirichlet":
        k_left = k_right = None
    elif boundary == "auto":
        k_left, k_right = system.tails
    else:
        raise ValueError(f"unknown boundary mode {boundary!r}")

    n = grid.n_points
    diag = np.empty(n)
    diag[1:-1] = (w_mid[:-1] + w_mid[1:]) / h**2
    off = -w_mid / h**2
    weights = np.full(n, h)
    if k_left is not None:
        diag[0] = (w_mid[0] / h + w_node[0] * k_left) / (h / 2)
        off[0] *= math.sqrt(2.0)
        weights[0] = h / 2
    if k_right is not None:
        diag[-1] = (w_mid[-1] / h - w_node[-1] * k_right) / (h / 2)
        off[-1] *= math.sqrt(2.0)
        weights[-1] = h / 2
    diag += pot

    first = 0 if k_left is not None else 1
    last = n if k_right is not None else n - 1
    return DiscretizedHamiltonian(
        diag=np.ascontiguousarray(diag[first:last]),
        offdiag=np.ascontiguousarray(off[first : last - 1]),
        grid=grid,
        first=first,
        weights=weights[first:last],
        boundary=("robin" if k_left is not None else "dirichlet", "robin" if k_right is not None else "dirichlet"),
    )


def _pivmin(off2: np.ndarray) -> float:
    return np.finfo(float).tiny * max(1.0, float(np.max(off2, initial=0.0)))


def sturm_count(hmat: DiscretizedHamiltonian, sigma: float, backend: str | None = None) -> int:
    """Number of eigenvalues strictly below ``sigma``."""
    kern = kernels.get(backend) if backend else kernels
    off2 = hmat.offdiag**2
    return kern.sturm_count(hmat.diag, off2, float(sigma), _pivmin(off2))


def _seed() -> int:
    return int(os.environ.get("PDEM_SPECTRA_SEED", "0"))


def lowest_eigenpairs(hmat: DiscretizedHamiltonian, count: int, backend: str | None = None,
                      seed: int | None = None, abs_tol: float = BISECT_ABS_TOL):
    """The ``count`` smallest eigenpairs as a list of (value, unit vector)."""
    if not 1 <= count <= hmat.size:
        raise ValueError(f"count must be in 1..{hmat.size}, got {count}")
    kern = kernels.get(backend) if backend else kernels
    diag, off = hmat.diag, hmat.offdiag
    off2 = off * off
    piv = _pivmin(off2)
    bound = hmat.norm_estimate()

    def n_below(s):
        return kern.sturm_count(diag, off2, s, piv)

    values = []
    lo = -1.0
    while n_below(lo) > 0 and lo > -bound:
        lo = max(4 * lo, -bound)
    for j in range(count):
        if values:
            lo = values[-1] - max(abs(values[-1]), 1.0) * 1e-12
        step = max(1.0, abs(lo))
        hi = lo + step
        while n_below(hi) <= j and hi < bound:
            step *= 2
            hi = min(lo + step, bound)
        val, ok = kern.bisect(diag, off2, j, lo, hi, abs_tol, 2 * EPS, piv, BISECT_MAX_ITER)
        if not ok:
            raise RuntimeError(f"bisection did not converge in {BISECT_MAX_ITER} iterations (NaN input?)")
        values.append(val)

    rng = np.random.default_rng(_seed() if seed is None else seed)
    vectors = []
    for val in values:
        sigma = val + 1e-10 * max(1.0, abs(val))
        v = rng.standard_normal(hmat.size)
        v /= np.linalg.norm(v)
        for _ in range(INVERSE_STEPS):
            v = kern.solve_shifted(diag, off, sigma, v, piv)
            for u in vectors:
                v -= np.dot(u, v) * u
            v /= np.linalg.norm(v)
        vectors.append(_fix_sign(v))
    return list(zip(values, vectors))


def _fix_sign(v: np.ndarray, rel: float = 1e-6) -> np.ndarray:
    first = np.argmax(np.abs(v) > rel * np.max(np.abs(v)))
    return -v if v[first] < 0 else v


def analytic_residual(potential, mass: MassProfile, level, n_samples: int = 512) -> float:
    """max |H psi - E psi| / max |psi| on the level's effective support.

    Evaluated in long double: the kinetic and potential terms grow like 1/M in
    the tails and cancel, so double precision alone would dominate the result.
    """
    lo, hi = level.support
    x = np.linspace(np.longdouble(lo), np.longdouble(hi), n_samples)
    psi, d1, d2 = level.evaluate(x)
    m, m1 = mass.value(x), mass.d1(x)
    res = -d2 / m + (m1 / (m * m)) * d1 + (potential(x) - np.longdouble(level.energy)) * psi
    return float(np.max(np.abs(res)) / np.max(np.abs(psi)))


def count_nodes(samples, rel_floor: float = 1e-12) -> int:
    """Strict sign changes, ignoring samples below ``rel_floor * max|samples|``."""
    s = np.asarray(samples, dtype=float)
    peak = np.max(np.abs(s)) if s.size else 0.0
    if not peak > 0:
        raise ValueError("degenerate function")
    kept = s[np.abs(s) >= rel_floor * peak]
    return int(np.count_nonzero(np.signbit(kept[1:]) != np.signbit(kept[:-1])))


@dataclass
class SpectrumReport:
    analytic: list[float]
    numeric: list[float]
    rel_err: list[float]
    error_kind: list[str]
    nodes: list[int]
    boundary_ok: list[bool]
    grid: Grid
    boundary: tuple[str, str]
    rel_tol: float = 2e-3
    abs_tol: float = 5e-3
    failures: list[str] = field(default_factory=list)

    def __post_init__(self):
        lengths = {len(self.analytic), len(self.numeric), len(self.rel_err), len(self.nodes), len(self.boundary_ok)}
        if len(lengths) != 1:
            raise ValueError("spectrum report columns must have equal lengths")
        self.failures = self._check()

    def _check(self) -> list[str]:
        out = []
        for n, (e, num, err, kind, nodes, bc) in enumerate(
            zip(self.analytic, self.numeric, self.rel_err, self.error_kind, self.nodes, self.boundary_ok)
        ):
            tol = self.rel_tol if kind == "rel" else self.abs_tol
            if not err <= tol:
                out.append(f"level {n}: {kind} error {err:.3e} > {tol:g} (analytic {e!r}, numeric {num!r})")
            if nodes != n:
                out.append(f"level {n}: numeric eigenvector has {nodes} nodes")
            if not bc:
                out.append(f"level {n}: boundary condition |psi|^2/sqrt(M) -> 0 fails")
        return out

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        return {
            "analytic": self.analytic,
            "numeric": self.numeric,
            "rel_err": self.rel_err,
            "error_kind": self.error_kind,
            "nodes": self.nodes,
            "boundary_ok": self.boundary_ok,
            "grid": self.grid.to_dict(),
            "boundary": list(self.boundary),
            "tolerance": {"rel": self.rel_tol, "abs": self.abs_tol},
            "passed": self.passed,
            "failures": self.failures,
        }


def numeric_levels(system, count: int, grid: Grid | None = None, backend: str | None = None):
    """(hmat, eigenpairs) of the discretized ``system``."""
    grid = grid or default_grid(system)
    hmat = discretize(system, grid)
    return hmat, lowest_eigenpairs(hmat, count, backend=backend)


def verify_spectrum(system, count: int, grid: Grid | None = None, rel_tol: float = 2e-3,
                    abs_tol: float = 5e-3, backend: str | None = None) -> SpectrumReport:
    """Closed-form energies of ``system`` against the finite-difference oracle."""
    if system.n_levels is not None and count > system.n_levels:
        raise ValueError(f"count {count} exceeds the {system.n_levels} known levels")
    grid = grid or default_grid(system)
    hmat, pairs = numeric_levels(system, count, grid, backend)
    q2 = system.q**2
    analytic, numeric, errs, kinds, nodes, bcs = [], [], [], [], [], []
    for n, (val, vec) in enumerate(pairs):
        e = system.energy(n)
        analytic.append(float(e))
        numeric.append(float(val))
        if abs(e) < 1e-6 * q2:
            errs.append(abs(val - e) / q2)
            kinds.append("abs")
        else:
            errs.append(abs(val - e) / abs(e))
            kinds.append("rel")
        nodes.append(count_nodes(hmat.to_function(vec)))
        bcs.append(bool(boundary_condition_ok(system, n)))
    return SpectrumReport(analytic, numeric, errs, kinds, nodes, bcs, grid, hmat.boundary, rel_tol, abs_tol)

"""The three solvable families: Jacobi ES, generalized-Laguerre ES and QES.

Every wavefunction has the form psi_n = exp(l(x)) F_n(g(x)) with a
level-independent log-prefactor l; the base class assembles psi, psi', psi''
from l', l'', g', g'' and the polynomial derivatives.  All evaluators keep the
dtype of ``x`` so that verification code can run them in long double.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace
from typing import Callable

import numpy as np
from scipy import integrate

from . import orthopoly
from .pct import AmbiguityParams, MassProfile, PctData, ambiguity_shift, shift_coefficients
from .qes import QesSolution, qes_solve

LN2 = math.log(2.0)
SUPPORT_RATIO = 1e-18  # |psi|^2 cut relative to the peak
QUAD_RTOL = 1e-10


class Kind(str, enum.Enum):
    JACOBI_ES = "jacobi_es"
    LAGUERRE_ES = "laguerre_es"
    QES = "qes"


class InadmissibleParameters(ValueError):
    """Parameters outside the range where the levels are physical bound states."""


@dataclass(frozen=True)
class FamilySpec:
    kind: Kind
    q: float = 1.0
    a: float = 0.0
    b: float | None = None
    xi: float | None = None
    k: int | None = None
    v0: float = 0.0

    _KEYS = {
        Kind.JACOBI_ES: ("q", "a", "b", "v0"),
        Kind.LAGUERRE_ES: ("q", "a", "v0"),
        Kind.QES: ("q", "a", "xi", "k", "v0"),
    }

    def __post_init__(self):
        object.__setattr__(self, "kind", Kind(self.kind))
        if self.kind is Kind.JACOBI_ES and self.b is None:
            raise ValueError("jacobi_es needs parameter b")
        if self.kind is Kind.QES and (self.xi is None or self.k is None):
            raise ValueError("qes needs parameters xi and k")
        if self.k is not None:
            if int(self.k) != self.k:
                raise ValueError(f"k must be an integer, got {self.k}")
            object.__setattr__(self, "k", int(self.k))

    @property
    def lambda_(self) -> float:
        return {Kind.JACOBI_ES: 1 / self.q, Kind.LAGUERRE_ES: -1 / self.q, Kind.QES: self.q}[self.kind]

    def violations(self) -> list[str]:
        """Broken admissibility restrictions, as human-readable strings."""
        out = []
        if not self.q > 0:
            out.append(f"q > 0 (got q={self.q})")
        if self.kind is Kind.JACOBI_ES:
            if not (self.a > -0.5 and self.b > -0.5):
                out.append(f"a, b > -1/2 (got a={self.a}, b={self.b})")
        elif self.kind is Kind.LAGUERRE_ES:
            if not self.a > -0.5:
                out.append(f"a > -1/2 (got a={self.a})")
        else:
            if not self.xi > 0:
                out.append(f"xi > 0 (got xi={self.xi})")
            if self.k < 1:
                out.append(f"k >= 1 (got k={self.k})")
            if self.a == 0:
                out.append("a != 0")
            if not self.a < -2 * self.k + 1.5:
                out.append(f"a < -2k + 3/2 (got a={self.a}, k={self.k}, bound {-2 * self.k + 1.5})")
        return out

    def to_dict(self) -> dict:
        d = {"family": self.kind.value}
        for key in self._KEYS[self.kind]:
            d[key] = getattr(self, key)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "FamilySpec":
        d = dict(d)
        try:
            kind = Kind(d.pop("family"))
        except KeyError:
            raise ValueError("family spec needs a 'family' field") from None
        allowed = cls._KEYS[kind]
        unknown = sorted(set(d) - set(allowed))
        if unknown:
            raise ValueError(f"unknown field(s) for family {kind.value!r}: {', '.join(unknown)}")
        kwargs = {}
        for key, val in d.items():
            if key == "k":
                if isinstance(val, bool) or not float(val).is_integer():
                    raise ValueError(f"k must be an integer, got {val!r}")
                kwargs[key] = int(val)
            else:
                kwargs[key] = float(val)
        return cls(kind, **kwargs)



@dataclass(frozen=True)
class LevelFunction:
    """One known level: unnormalized psi with analytic derivatives and its L2 norm."""

    n: int
    energy: float
    evaluate: Callable  # x -> (psi, psi', psi'')
    norm: float
    support: tuple[float, float]

    def psi(self, x):
        return self.evaluate(x)[0]

    def d1(self, x):
        return self.evaluate(x)[1]

    def d2(self, x):
        return self.evaluate(x)[2]

    def normalized(self, x):
        return self.evaluate(x)[0] / self.norm


def _log_abs_poly(coeffs, g, log_g):
    """log|sum_j c_j g^j| without overflow for huge g (g > 0 assumed where large)."""
    coeffs = np.asarray(coeffs)
    deg = len(coeffs) - 1
    g = np.asarray(g)
    with np.errstate(all="ignore"):
        small = np.abs(g) <= 1
        u = np.where(small, 1.0, 1.0 / g)
        direct = np.zeros_like(g)
        scaled = np.zeros_like(g)
        for c in coeffs[::-1]:
            direct = direct * np.where(small, g, 0) + c
        for c in coeffs:
            scaled = scaled * u + c
        return np.where(small, np.log(np.abs(direct)), deg * log_g + np.log(np.abs(scaled)))


def _find_support(logpsi: Callable, lo: float, hi: float, n: int = 4001, ratio: float = SUPPORT_RATIO):
    x = np.linspace(lo, hi, n)
    with np.errstate(all="ignore"):
        lv = np.asarray(logpsi(x), dtype=float)
    lv = np.where(np.isnan(lv), -np.inf, lv)
    peak = np.max(lv)
    keep = np.nonzero(2 * (lv - peak) >= math.log(ratio))[0]
    i0, i1 = max(keep[0] - 1, 0), min(keep[-1] + 1, n - 1)
    return float(x[i0]), float(x[i1])


def _quad_norm(psi, lo, hi):
    val, _ = integrate.quad(lambda t: float(psi(np.float64(t))) ** 2, lo, hi,
                            epsrel=QUAD_RTOL, epsabs=0.0, limit=400)
    return math.sqrt(val)


class Family:
    """Common interface; see the subclasses for the closed forms."""

    kind: Kind

    def __init__(self, spec: FamilySpec):
        self.spec = spec
        self.q = spec.q
        self.v0 = spec.v0
        self._levels: dict[int, LevelFunction] = {}

    # -- per-family closed forms (subclasses) ---------------------------------
    mass: MassProfile
    n_levels: int | None = None  # None: infinite ladder
    tails: tuple[float | None, float | None]  # log-derivative of psi at -inf/+inf; None: faster than exponential

    def change_of_variable(self, x):
        raise NotImplementedError

    def log_prefactor(self, x):
        raise NotImplementedError

    def poly(self, n: int, g) -> orthopoly.PolyEval:
        raise NotImplementedError

    def log_abs_poly(self, n: int, x):
        raise NotImplementedError

    def log_abs_g1(self, x):
        raise NotImplementedError

    def log_g1_derivs(self, x):
        """First and second derivatives of log|g'(x)|."""
        raise NotImplementedError

    def pct(self, n: int) -> PctData:
        raise NotImplementedError

    def veff(self, x):
        raise NotImplementedError

    def veff_d1(self, x):
        raise NotImplementedError

    def _energy(self, n: int) -> float:
        raise NotImplementedError

    # -- shared machinery --------------------------------------------------------
    def __repr__(self):
        return f"{type(self).__name__}({self.spec.to_dict()})"

    def check_level(self, n: int):
        if int(n) != n or n < 0:
            raise ValueError(f"level index must be a non-negative integer, got {n}")
        if self.n_levels is not None and n >= self.n_levels:
            raise ValueError(f"level outside QES window: n={n}, known levels 0..{self.n_levels - 1}")

    def energy(self, n: int) -> float:
        self.check_level(n)
        return self._energy(n)

    def psi(self, n: int, x):
        """Unnormalized (psi, psi', psi'') of level n."""
        self.check_level(n)
        x = np.asarray(x)
        ell, ell1, ell2 = self.log_prefactor(x)
        g, g1, g2 = self.change_of_variable(x)
        f, fd, fdd = self.poly(n, g)
        with np.errstate(under="ignore", over="ignore"):
            e = np.exp(ell)
            p = e * f
            p1 = e * (ell1 * f + g1 * fd)
            p2 = e * ((ell2 + ell1 * ell1) * f + (2 * ell1 * g1 + g2) * fd + g1 * g1 * fdd)
        return p, p1, p2

    def log_abs_psi(self, n: int, x):
        self.check_level(n)
        x = np.asarray(x, dtype=float)
        with np.errstate(all="ignore"):
            return self.log_prefactor(x)[0] + self.log_abs_poly(n, x)

    def support_window(self) -> tuple[float, float]:
        rates = [abs(r) for r in self.tails if r is not None]
        width = 30 / self.q + (25 / min(rates) if rates else 0.0)
        return -width, width

    def support(self, n: int) -> tuple[float, float]:
        return _find_support(lambda x: self.log_abs_psi(n, x), *self.support_window())

    def level(self, n: int) -> LevelFunction:
        self.check_level(n)
        if n not in self._levels:
            lo, hi = self.support(n)
            evaluate = lambda x, _n=n: self.psi(_n, x)  # noqa: E731
            norm = _quad_norm(lambda x: evaluate(x)[0], lo, hi)
            self._levels[n] = LevelFunction(n, self.energy(n), evaluate, norm, (lo, hi))
        return self._levels[n]

    def initial_potential(self, amb: AmbiguityParams, x):
        """V(x) = V_eff(x) - (V_eff - V) for the given ordering."""
        return self.veff(x) - ambiguity_shift(self.mass, amb, x)

    def default_grid_bounds(self) -> tuple[float, float]:
        return (-10 / self.q, 10 / self.q) if self.kind is Kind.JACOBI_ES else (-6 / self.q, 14 / self.q)


def _exp_mass(q: float) -> MassProfile:
    """M(x) = exp(-qx)."""
    return MassProfile(
        value=lambda x: np.exp(-q * x),
        d1=lambda x: -q * np.exp(-q * x),
        d2=lambda x: q * q * np.exp(-q * x),
        log_value=lambda x: -q * np.asarray(x),
    )


def _sech2(qx):
    with np.errstate(over="ignore"):
        return 4 / (np.exp(qx) + np.exp(-qx)) ** 2


class JacobiFamily(Family):
    """g = tanh qx, M = sech^2 qx, F_n = P_n^(a,b)."""

    kind = Kind.JACOBI_ES

    def __init__(self, spec):
        super().__init__(spec)
        q = self.q
        self._al = (spec.a + 1) / 2
        self._be = (spec.b + 1) / 2
        self.mass = MassProfile(
            value=lambda x: _sech2(q * x),
            d1=lambda x: -2 * q * np.tanh(q * x) * _sech2(q * x),
            d2=lambda x: q * q * _sech2(q * x) * (6 * np.tanh(q * x) ** 2 - 2),
            log_value=lambda x: 2 * (LN2 - np.logaddexp(q * np.asarray(x), -q * np.asarray(x))),
        )
        self.tails = ((spec.b + 1) * q, -(spec.a + 1) * q)

    def change_of_variable(self, x):
        q = self.q
        t, s2 = np.tanh(q * x), _sech2(q * x)
        return t, q * s2, -2 * q * q * t * s2

    def log_prefactor(self, x):
        q, al, be = self.q, self._al, self._be
        qx = q * x
        with np.errstate(over="ignore"):
            log_1mt = LN2 - np.logaddexp(0, 2 * qx)
            log_1pt = LN2 - np.logaddexp(0, -2 * qx)
        t = np.tanh(qx)
        return (
            al * log_1mt + be * log_1pt,
            q * ((be - al) - (al + be) * t),
            -q * q * (al + be) * _sech2(qx),
        )

    def poly(self, n, g):
        return orthopoly.jacobi_eval(n, self.spec.a, self.spec.b, g)

    def log_abs_poly(self, n, x):
        return np.log(np.abs(self.poly(n, np.tanh(self.q * x)).value))

    def log_abs_g1(self, x):
        return math.log(self.q) + self.mass.log_value(x)

    def log_g1_derivs(self, x):
        q = self.q
        return -2 * q * np.tanh(q * x), -2 * q * q * _sech2(q * x)

    def pct(self, n):
        a, b, q = self.spec.a, self.spec.b, self.q
        s = a + b + 2
        return PctData(
            g=lambda x: np.tanh(q * x),
            g1=lambda x: q * _sech2(q * x),
            g2=lambda x: -2 * q * q * np.tanh(q * x) * _sech2(q * x),
            g3=lambda x: -2 * q**3 * _sech2(q * x) * (1 - 3 * np.tanh(q * x) ** 2),
            Q=lambda g: (b - a - s * g) / (1 - g * g),
            Qdot=lambda g: (-s * (1 - g * g) + 2 * g * (b - a - s * g)) / (1 - g * g) ** 2,
            R=lambda g: n * (n + a + b + 1) / (1 - g * g),
        )

    def _potential(self, x, f=0.0, const=0.0):
        a, b, q = self.spec.a, self.spec.b, self.q
        x = np.asarray(x)
        return 0.25 * q * q * (
            (a * a - 1 + f) * np.exp(2 * q * x) + (b * b - 1 + f) * np.exp(-2 * q * x) + a * a + b * b - 2 + const
        ) + self.v0

    def veff(self, x):
        return self._potential(x)

    def initial_potential(self, amb, x):
        # V_eff + q^2 (f cosh^2 qx - g) with the exponentials merged before evaluation
        f, g = shift_coefficients(amb)
        return self._potential(x, f, 2 * f - 4 * g)

    def veff_d1(self, x):
        a, b, q = self.spec.a, self.spec.b, self.q
        x = np.asarray(x)
        return 0.5 * q**3 * ((a * a - 1) * np.exp(2 * q * x) - (b * b - 1) * np.exp(-2 * q * x))

    def _energy(self, n):
        a, b, q = self.spec.a, self.spec.b, self.q
        return q * q * (n + (a + b) / 2) * (n + (a + b + 2) / 2) + self.v0


class LaguerreFamily(Family):
    """g = exp(-qx), M = exp(-qx), F_n = L_n^(a)."""

    kind = Kind.LAGUERRE_ES

    def __init__(self, spec):
        super().__init__(spec)
        self.mass = _exp_mass(self.q)
        self.tails = (None, -(spec.a + 1) * self.q / 2)

    def change_of_variable(self, x):
        q = self.q
        y = np.exp(-q * x)
        return y, -q * y, q * q * y

    def log_prefactor(self, x):
        q, a = self.q, self.spec.a
        with np.errstate(over="ignore"):
            y = np.exp(-q * x)
        return -0.5 * ((a + 1) * q * x + y), -0.5 * q * ((a + 1) - y), -0.5 * q * q * y

    def poly(self, n, g):
        return orthopoly.laguerre_eval(n, self.spec.a, g)

    @staticmethod
    def _log_abs_laguerre(n, a, g, log_g):
        # L_n^(a)(g) ~ (-g)^n / n! once g dwarfs every root
        with np.errstate(all="ignore"):
            big = g > 1e50
            direct = np.log(np.abs(orthopoly.laguerre(n, a, np.where(big, 1.0, g))))
            return np.where(big, n * log_g - math.lgamma(n + 1), direct)

    def log_abs_poly(self, n, x):
        with np.errstate(over="ignore"):
            g = np.exp(-self.q * x)
        return self._log_abs_laguerre(n, self.spec.a, g, -self.q * x)

    def log_abs_g1(self, x):
        return math.log(self.q) - self.q * np.asarray(x)

    def log_g1_derivs(self, x):
        x = np.asarray(x)
        return np.full_like(x, -self.q), np.zeros_like(x)

    def pct(self, n):
        a, q = self.spec.a, self.q
        return PctData(
            g=lambda x: np.exp(-q * x),
            g1=lambda x: -q * np.exp(-q * x),
            g2=lambda x: q * q * np.exp(-q * x),
            g3=lambda x: -(q**3) * np.exp(-q * x),
            Q=lambda g: (a + 1 - g) / g,
            Qdot=lambda g: -(a + 1) / (g * g),
            R=lambda g: n / g,
        )

    def _potential(self, x, f=0.0):
        a, q = self.spec.a, self.q
        x = np.asarray(x)
        return 0.25 * q * q * ((a * a - 1 + f) * np.exp(q * x) + np.exp(-q * x)) + self.v0

    def veff(self, x):
        return self._potential(x)

    def initial_potential(self, amb, x):
        return self._potential(x, shift_coefficients(amb)[0])

    def veff_d1(self, x):
        a, q = self.spec.a, self.q
        x = np.asarray(x)
        return 0.25 * q**3 * ((a * a - 1) * np.exp(q * x) - np.exp(-q * x))

    def _energy(self, n):
        return self.q**2 * (n + (self.spec.a + 1) / 2) + self.v0


def _horner3(coeffs, g):
    """(F, F', F'') of a polynomial with ascending coefficients."""
    f = np.zeros_like(g)
    fd = np.zeros_like(g)
    fdd = np.zeros_like(g)
    for c in coeffs[::-1]:
        fdd = fdd * g + 2 * fd
        fd = fd * g + f
        f = f * g + c
    return orthopoly.PolyEval(f, fd, fdd)


class QesFamily(Family):
    """g = exp(qx), M = exp(-qx), F_n from the QES coefficient eigenproblem."""

    kind = Kind.QES

    def __init__(self, spec, solution: QesSolution | None = None):
        super().__init__(spec)
        self.solution = solution or qes_solve(spec.k, spec.a, spec.xi)
        self.n_levels = spec.k + 1
        self.mass = _exp_mass(self.q)
        self.tails = (None, (spec.a - 2 + 2 * spec.k) * self.q / 2)

    def coeffs(self, n: int) -> np.ndarray:
        self.check_level(n)
        return self.solution.levels[n].coeffs

    def c(self, n: int) -> float:
        self.check_level(n)
        return self.solution.levels[n].c

    def change_of_variable(self, x):
        q = self.q
        with np.errstate(over="ignore"):
            y = np.exp(q * x)
        return y, q * y, q * q * y

    def log_prefactor(self, x):
        q, a, xi = self.q, self.spec.a, self.spec.xi
        with np.errstate(over="ignore"):
            y = np.exp(-2 * q * x)
        return (
            0.5 * (a - 2) * q * x + 0.25 * a * xi * xi * y,
            0.5 * (a - 2) * q - 0.5 * a * xi * xi * q * y,
            a * xi * xi * q * q * y,
        )

    def poly(self, n, g):
        return _horner3(self.coeffs(n), g)

    def log_abs_poly(self, n, x):
        with np.errstate(over="ignore"):
            g = np.exp(self.q * x)
        return _log_abs_poly(self.coeffs(n), g, self.q * x)

    def log_abs_g1(self, x):
        return math.log(self.q) + self.q * np.asarray(x)

    def log_g1_derivs(self, x):
        x = np.asarray(x)
        return np.full_like(x, self.q), np.zeros_like(x)

    def pct(self, n):
        a, xi, q = self.spec.a, self.spec.xi, self.q
        b, c = self.solution.b, self.c(n)
        return PctData(
            g=lambda x: np.exp(q * x),
            g1=lambda x: q * np.exp(q * x),
            g2=lambda x: q * q * np.exp(q * x),
            g3=lambda x: q**3 * np.exp(q * x),
            Q=lambda g: a * (g * g - xi * xi) / g**3,
            Qdot=lambda g: -a / (g * g) + 3 * a * xi * xi / g**4,
            R=lambda g: (b * g + c) / g**3,
        )

    def _veff_coeffs(self):
        a, xi, k = self.spec.a, self.spec.xi, self.spec.k
        return 0.25 * (2 * k + a - 2) * (2 * k + a), -0.5 * a * (a - 3) * xi * xi, 0.25 * a * a * xi**4

    def _potential(self, x, f=0.0):
        c1, c2, c3 = self._veff_coeffs()
        q = self.q
        x = np.asarray(x)
        return q * q * ((c1 + 0.25 * f) * np.exp(q * x) + c2 * np.exp(-q * x) + c3 * np.exp(-3 * q * x)) + self.v0

    def veff(self, x):
        return self._potential(x)

    def initial_potential(self, amb, x):
        return self._potential(x, shift_coefficients(amb)[0])

    def veff_d1(self, x):
        c1, c2, c3 = self._veff_coeffs()
        q = self.q
        x = np.asarray(x)
        return q**3 * (c1 * np.exp(q * x) - c2 * np.exp(-q * x) - 3 * c3 * np.exp(-3 * q * x))

    def _energy(self, n):
        return self.q**2 * self.c(n) + self.v0


_CLASSES = {Kind.JACOBI_ES: JacobiFamily, Kind.LAGUERRE_ES: LaguerreFamily, Kind.QES: QesFamily}


def make_family(spec: FamilySpec | dict, validate: bool = True, solution: QesSolution | None = None) -> Family:
    """Build a family; with ``validate`` the physical admissibility ranges are enforced."""
    if isinstance(spec, dict):
        spec = FamilySpec.from_dict(spec)
    if not spec.q > 0:
        raise InadmissibleParameters(f"{spec.kind.value}: q > 0 required (got q={spec.q})")
    if validate:
        bad = spec.violations()
        if bad:
            raise InadmissibleParameters(f"{spec.kind.value}: parameter restriction violated: {'; '.join(bad)}")
    if spec.kind is Kind.QES:
        return QesFamily(spec, solution)
    return _CLASSES[spec.kind](spec)


def jacobi_es(q=1.0, a=0.0, b=0.0, v0=0.0, validate=True) -> JacobiFamily:
    return make_family(FamilySpec(Kind.JACOBI_ES, q=q, a=a, b=b, v0=v0), validate)


def laguerre_es(q=1.0, a=0.0, v0=0.0, validate=True) -> LaguerreFamily:
    return make_family(FamilySpec(Kind.LAGUERRE_ES, q=q, a=a, v0=v0), validate)


def qes(q=1.0, a=-1.0, xi=1.0, k=1, v0=0.0, validate=True) -> QesFamily:
    return make_family(FamilySpec(Kind.QES, q=q, a=a, xi=xi, k=k, v0=v0), validate)


def shifted_spec(spec: FamilySpec) -> FamilySpec:
    """Parameters of the shape-invariant partner of an ES family."""
    if spec.kind is Kind.JACOBI_ES:
        return replace(spec, a=spec.a + 1, b=spec.b + 1)
    if spec.kind is Kind.LAGUERRE_ES:
        return replace(spec, a=spec.a + 1, v0=spec.v0 + 0.5 * spec.q**2)
    raise ValueError("QES partners are not shape invariant")

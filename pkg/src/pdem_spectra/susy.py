"""First-order intertwining eta = M^(-1/2) d/dx + B and the partner Hamiltonians.

With B = -psi_0' / (sqrt(M) psi_0) and epsilon = E_0,

    V_eff  = epsilon + B^2 - (B / sqrt(M))'
    V1_eff = V_eff + 2 B' / sqrt(M) + M'' / (2 M^2) - 3 M'^2 / (4 M^3)

and the partner levels are eta psi_{n+1} with energies E_{n+1}.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .families import (
    Family,
    FamilySpec,
    Kind,
    LevelFunction,
    LaguerreFamily,
    _find_support,
    _log_abs_poly,
    _quad_norm,
    make_family,
    shifted_spec,
)


class PartnerTag(str, enum.Enum):
    SHAPE_INVARIANT_JACOBI = "ShapeInvariantJacobi"
    SHAPE_INVARIANT_LAGUERRE = "ShapeInvariantLaguerre"
    QES_RATIONAL_K1 = "QesRationalK1"
    QES_RATIONAL_K2 = "QesRationalK2"
    GENERIC_NUMERIC = "GenericNumeric"


def _b_jacobi(fam, x):
    a, b, q = fam.spec.a, fam.spec.b, fam.q
    ch, sh = np.cosh(q * x), np.sinh(q * x)
    bx = 0.5 * q * ((a - b) * ch + (a + b + 2) * sh)
    return bx, 0.5 * q * q * ((a - b) * sh + (a + b + 2) * ch), q * q * bx


def _b_laguerre(fam, x):
    a, q = fam.spec.a, fam.q
    ep, em = np.exp(0.5 * q * x), np.exp(-0.5 * q * x)
    return (
        0.5 * q * ((a + 1) * ep - em),
        0.25 * q * q * ((a + 1) * ep + em),
        0.125 * q**3 * ((a + 1) * ep - em),
    )


def _b_qes(fam, x):
    a, xi, q = fam.spec.a, fam.spec.xi, fam.q
    g = np.exp(q * x)
    p = np.polynomial.Polynomial(fam.coeffs(0))
    f, fd, fdd, fddd = p(g), p.deriv(1)(g), p.deriv(2)(g), p.deriv(3)(g)
    u = fd / f
    w = fdd / f - u * u
    z = fddd / f - 3 * fdd * fd / (f * f) + 2 * u**3
    c1, c2 = -0.5 * (a - 2), 0.5 * a * xi * xi
    e1, e3, e5, e7, em3 = (np.exp(s * q * x) for s in (0.5, 1.5, 2.5, 3.5, -1.5))
    bx = q * (c1 * e1 + c2 * em3 - e3 * u)
    b1 = q * q * (0.5 * c1 * e1 - 1.5 * c2 * em3 - 1.5 * e3 * u - e5 * w)
    b2 = q**3 * (0.25 * c1 * e1 + 2.25 * c2 * em3 - 2.25 * e3 * u - 4 * e5 * w - e7 * z)
    return bx, b1, b2


_B_FORMS = {Kind.JACOBI_ES: _b_jacobi, Kind.LAGUERRE_ES: _b_laguerre, Kind.QES: _b_qes}


@dataclass(frozen=True)
class Intertwiner:
    family: Family
    epsilon: float

    def b_all(self, x):
        """(B, B', B'') at x from the closed forms."""
        return _B_FORMS[self.family.kind](self.family, np.asarray(x))

    def B(self, x):
        return self.b_all(x)[0]

    def B1(self, x):
        return self.b_all(x)[1]

    def apply(self, psi, dpsi, x):
        """(eta psi)(x) given psi and psi' sampled at x."""
        return dpsi / np.sqrt(self.family.mass.value(x)) + self.B(x) * psi


def build_intertwiner(family: Family) -> Intertwiner:
    return Intertwiner(family, family.energy(0))


def partner_veff_generic(itw: Intertwiner, x):
    x = np.asarray(x)
    mass = itw.family.mass
    m, m1, m2 = mass.value(x), mass.d1(x), mass.d2(x)
    return itw.family.veff(x) + 2 * itw.B1(x) / np.sqrt(m) + m2 / (2 * m * m) - 0.75 * m1 * m1 / m**3


def _qes_closed(fam, x):
    a, xi, q, k = fam.spec.a, fam.spec.xi, fam.q, fam.spec.k
    e = np.exp(q * x)
    common = -0.5 * a * a * xi * xi / e + 0.25 * a * a * xi**4 / e**3
    if k == 1:
        body = 0.25 * (a - 1) * (a + 1) * e + common + 3 * xi * xi / (e + xi) - 2 * xi**3 / (e + xi) ** 2
        return q * q * body + fam.v0 - q * q * xi
    delta = math.sqrt(2 * a * (2 * a + 3))
    den = e * e - delta / (a + 2) * xi * e + a / (a + 2) * xi * xi
    z1 = (6 * (a + 2) * (a + 1) * e - (a + 6) * delta * xi) / den
    z2 = ((3 * a + 4) * e - delta * xi) / den**2
    body = (
        0.25 * (a + 1) * (a + 3) * e
        + common
        + a * xi * xi / (a + 2) ** 3 * z1
        - 4 * a * a * xi**4 / (a + 2) ** 4 * z2
    )
    return q * q * body + fam.v0 + q * q * delta * xi / (a + 2)


def partner_veff_closed(family: Family, x):
    """Closed-form partner potential: shifted family for ES, rational forms for QES k = 1, 2."""
    if family.kind is Kind.QES:
        if family.spec.k not in (1, 2):
            raise ValueError("no closed form in paper for QES k >= 3; use partner_veff_generic")
        return _qes_closed(family, np.asarray(x))
    return make_family(shifted_spec(family.spec), validate=False).veff(x)


def intertwine(itw: Intertwiner, level: LevelFunction, x):
    psi, dpsi, _ = level.evaluate(x)
    return itw.apply(psi, dpsi, np.asarray(x))


class PartnerPotential:
    """H1 as a system usable by the numerics module (mass, veff, tails, levels)."""

    def __init__(self, source: Family):
        self.source = source
        self.intertwiner = build_intertwiner(source)
        self.q = source.q
        self.mass = source.mass
        self.kind = source.kind
        if source.kind is Kind.QES:
            self.n_levels = source.n_levels - 1
            self.tag = {1: PartnerTag.QES_RATIONAL_K1, 2: PartnerTag.QES_RATIONAL_K2}.get(
                source.spec.k, PartnerTag.GENERIC_NUMERIC
            )
            self.shifted = None
            self.tails = (None, source.tails[1] - 0.5 * source.q)
        else:
            self.n_levels = None
            self.tag = (
                PartnerTag.SHAPE_INVARIANT_JACOBI
                if source.kind is Kind.JACOBI_ES
                else PartnerTag.SHAPE_INVARIANT_LAGUERRE
            )
            self.shifted: FamilySpec | None = shifted_spec(source.spec)
            shifted = make_family(self.shifted, validate=False)
            self.tails = shifted.tails
        self._levels: dict[int, LevelFunction] = {}

    def __repr__(self):
        return f"PartnerPotential({self.source!r}, tag={self.tag.value})"

    @property
    def has_closed_form(self) -> bool:
        return self.tag is not PartnerTag.GENERIC_NUMERIC

    def veff(self, x):
        return partner_veff_generic(self.intertwiner, x)

    def veff_closed(self, x):
        return partner_veff_closed(self.source, x)

    def check_level(self, n):
        if int(n) != n or n < 0:
            raise ValueError(f"level index must be a non-negative integer, got {n}")
        if self.n_levels is not None and n >= self.n_levels:
            raise ValueError(f"level outside QES window: partner knows levels 0..{self.n_levels - 1}")

    def energy(self, n: int) -> float:
        self.check_level(n)
        return self.source.energy(n + 1)

    def _ratio(self, m: int, g):
        """(W_m / F_0, d/dg, d2/dg2) with W_m = F_m' F_0 - F_0' F_m."""
        src = self.source
        if src.kind is not Kind.QES:
            # F_0 = 1 so W_m = F_m', itself a shifted polynomial of degree m - 1
            shifted = make_family(self.shifted, validate=False)
            if src.kind is Kind.JACOBI_ES:
                scale = 0.5 * (m + src.spec.a + src.spec.b + 1)
            else:
                scale = -1.0
            w = shifted.poly(m - 1, g)
            return scale * w.value, scale * w.d1, scale * w.d2
        P = np.polynomial.Polynomial
        fm, f0 = P(src.coeffs(m)), P(src.coeffs(0))
        wr = fm.deriv() * f0 - f0.deriv() * fm
        w, w1, w2 = wr(g), wr.deriv(1)(g), wr.deriv(2)(g)
        h, h1, h2 = f0(g), f0.deriv(1)(g), f0.deriv(2)(g)
        r = w / h
        r1 = (w1 - h1 * r) / h
        r2 = (w2 - 2 * h1 * r1 - h2 * r) / h
        return r, r1, r2

    def psi(self, n: int, x):
        """(eta psi_{n+1}, its first and second derivatives) at x.

        Uses eta psi_m = sign(g') exp(l) |g'| M^(-1/2) W_m / F_0, which avoids the
        cancellation between psi' / sqrt(M) and B psi in the tails.
        """
        self.check_level(n)
        src, x = self.source, np.asarray(x)
        ell, ell1, ell2 = src.log_prefactor(x)
        gl1, gl2 = src.log_g1_derivs(x)
        m, m1, m2 = src.mass.value(x), src.mass.d1(x), src.mass.d2(x)
        r1 = m1 / m
        phi1 = ell1 + gl1 - 0.5 * r1
        phi2 = ell2 + gl2 - 0.5 * (m2 / m - r1 * r1)
        g, g1, g2 = src.change_of_variable(x)
        w, w1, w2 = self._ratio(n + 1, g)
        with np.errstate(under="ignore", over="ignore"):
            e = np.sign(g1) * np.exp(ell + src.log_abs_g1(x) - 0.5 * src.mass.log_value(x))
            y = e * w
            y1 = e * (phi1 * w + g1 * w1)
            y2 = e * ((phi2 + phi1 * phi1) * w + (2 * phi1 * g1 + g2) * w1 + g1 * g1 * w2)
        return y, y1, y2

    def _log_abs_wronskian(self, m: int, x):
        """log|F_m' F_0 - F_0' F_m| at g(x)."""
        src = self.source
        if src.kind is Kind.JACOBI_ES:
            return np.log(np.abs(src.poly(m, np.tanh(src.q * x)).d1))
        if src.kind is Kind.LAGUERRE_ES:
            with np.errstate(over="ignore"):
                g = np.exp(-src.q * x)
            return LaguerreFamily._log_abs_laguerre(m - 1, src.spec.a + 1, g, -src.q * x)
        P = np.polynomial.Polynomial
        fm, f0 = P(src.coeffs(m)), P(src.coeffs(0))
        wr = (fm.deriv() * f0 - f0.deriv() * fm).trim()
        with np.errstate(over="ignore"):
            g = np.exp(src.q * x)
        return _log_abs_poly(wr.coef, g, src.q * x)

    def log_abs_psi(self, n: int, x):
        # eta psi_m = M^(-1/2) exp(l) g' W_m / F_0 with W_m the polynomial Wronskian
        self.check_level(n)
        src, x = self.source, np.asarray(x, dtype=float)
        with np.errstate(all="ignore"):
            return (
                src.log_prefactor(x)[0]
                - 0.5 * src.mass.log_value(x)
                + src.log_abs_g1(x)
                + self._log_abs_wronskian(n + 1, x)
                - src.log_abs_poly(0, x)
            )

    def support(self, n: int):
        return _find_support(lambda x: self.log_abs_psi(n, x), *self.source.support_window())

    def level(self, n: int) -> LevelFunction:
        self.check_level(n)
        if n not in self._levels:
            lo, hi = self.support(n)
            evaluate = lambda x, _n=n: self.psi(_n, x)  # noqa: E731
            norm = _quad_norm(lambda x: evaluate(x)[0], lo, hi)
            self._levels[n] = LevelFunction(n, self.energy(n), evaluate, norm, (lo, hi))
        return self._levels[n]

    def default_grid_bounds(self):
        return self.source.default_grid_bounds()


def make_partner(family: Family) -> PartnerPotential:
    return PartnerPotential(family)

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pdem_spectra import (
    BEN_DANIEL_DUKE,
    ZHU_KROEMER,
    AmbiguityParams,
    ambiguity_shift,
    boundary_condition_ok,
    jacobi_es,
    laguerre_es,
    pct_rhs,
    prefactor_log_derivative,
    qes,
    shift_coefficients,
)
from pdem_spectra.numerics import constant_mass
from pdem_spectra.pct import MassProfile, PctData

from conftest import n_levels


def test_gamma_derived():
    amb = AmbiguityParams(0.3, -0.8)
    assert amb.gamma == pytest.approx(-0.5)
    with pytest.raises(ValueError):
        AmbiguityParams(0.0, 0.0, 0.0)


def test_named_orderings():
    assert shift_coefficients(ZHU_KROEMER) == (1.0, 0.0)
    assert BEN_DANIEL_DUKE.gamma == 0.0


def test_bdd_shift_vanishes(family):
    x = np.linspace(-4, 4, 33)
    assert np.all(ambiguity_shift(family.mass, BEN_DANIEL_DUKE, x) == 0)


def test_constant_mass_shift_vanishes():
    x = np.linspace(-2, 2, 9)
    assert np.all(ambiguity_shift(constant_mass(1.0), AmbiguityParams(0.7, -2.1), x) == 0)


def test_zhu_kroemer_jacobi_origin():
    fam = jacobi_es(1.0, 1.0, 1.0)
    assert ambiguity_shift(fam.mass, ZHU_KROEMER, 0.0) == pytest.approx(-1.0, abs=1e-15)


GRID = [-1.0, -0.5, 0.0, 0.5, 1.0]


@pytest.mark.parametrize("alpha", GRID)
@pytest.mark.parametrize("beta", GRID)
def test_shift_closed_forms(alpha, beta):
    amb = AmbiguityParams(alpha, beta)
    f, g = shift_coefficients(amb)
    # independent expansions of f and g
    assert f == pytest.approx(4 * alpha**2 + 4 * alpha * beta + 4 * alpha + 2 * beta + 2, abs=1e-14)
    assert g == pytest.approx(4 * alpha**2 + 4 * alpha + 1 + 4 * alpha * beta + beta, abs=1e-14)
    x = np.linspace(-3, 3, 25)
    for q in (1.0, 1.7):
        jac = jacobi_es(q, 0.5, 0.5)
        np.testing.assert_allclose(
            jac.initial_potential(amb, x) - jac.veff(x), q * q * (f * np.cosh(q * x) ** 2 - g),
            rtol=1e-10, atol=1e-10,
        )
        lag = laguerre_es(q, 0.5)
        np.testing.assert_allclose(
            lag.initial_potential(amb, x) - lag.veff(x), 0.25 * q * q * f * np.exp(q * x), rtol=1e-10, atol=1e-10
        )


@settings(max_examples=100, deadline=None)
@given(alpha=st.floats(-3, 3), beta=st.floats(-3, 3), x=st.floats(-3, 3))
def test_shift_property(alpha, beta, x):
    amb = AmbiguityParams(alpha, beta)
    f, g = shift_coefficients(amb)
    jac = jacobi_es(1.0, 0.2, 0.2)
    ref = -(f * math.cosh(x) ** 2 - g)
    assert float(ambiguity_shift(jac.mass, amb, x)) == pytest.approx(ref, rel=1e-10, abs=1e-10)


def test_free_particle_initial_potential():
    fam = jacobi_es(1.0, 0.0, 0.0, v0=3.0)
    x = np.linspace(-6, 6, 49)
    np.testing.assert_allclose(fam.initial_potential(ZHU_KROEMER, x), 3.0, atol=1e-12)


def test_laguerre_zhu_kroemer_origin():
    fam = laguerre_es(1.0, 1.0)
    assert fam.initial_potential(ZHU_KROEMER, 0.0) == pytest.approx(0.5, abs=1e-15)


def test_pct_rhs_is_energy_minus_veff(family):
    # long double: for E = 0 levels the absolute floor sits below double cancellation noise
    x = np.linspace(np.longdouble(-3) / family.q, np.longdouble(3) / family.q, 64)
    for n in range(n_levels(family)):
        total = pct_rhs(family.pct(n), family.mass, x) + family.veff(x)
        e = family.energy(n)
        assert np.ptp(total) <= 1e-9 * abs(e) + 1e-12
        assert np.mean(total) == pytest.approx(e, rel=1e-9, abs=1e-12)


def test_pct_rhs_examples():
    fam = jacobi_es(1.0, 1.0, 1.0)
    x = np.linspace(-2, 2, 11)
    np.testing.assert_allclose(pct_rhs(fam.pct(0), fam.mass, x) + fam.veff(x), 2.0, rtol=1e-10)
    lag = laguerre_es(2.0, 1.0)
    assert pct_rhs(lag.pct(1), lag.mass, 0.0) + lag.veff(0.0) == pytest.approx(8.0, rel=1e-12)


def five_point(fn, x, h=1e-3):
    return (fn(x - 2 * h) - 8 * fn(x - h) + 8 * fn(x + h) - fn(x + 2 * h)) / (12 * h)


def test_prefactor_log_derivative():
    fam = jacobi_es(1.0, 0.0, 0.0)
    assert prefactor_log_derivative(fam.pct(0), fam.mass, 0.0) == pytest.approx(0.0, abs=1e-15)
    fam = jacobi_es(1.0, 1.0, 1.0)
    x = np.linspace(-3, 3, 13)
    p, d1, _ = fam.psi(0, x)
    np.testing.assert_allclose(prefactor_log_derivative(fam.pct(0), fam.mass, x), d1 / p, rtol=1e-12, atol=1e-14)
    lag = laguerre_es(1.0, 1.0)
    x = np.linspace(-1, 2, 7)
    num = five_point(lambda t: np.log(lag.psi(0, t)[0]), x)
    np.testing.assert_allclose(prefactor_log_derivative(lag.pct(0), lag.mass, x), num, rtol=1e-10, atol=1e-10)


def test_prefactor_matches_level_prefactor(family):
    # f'/f = l' for every catalog family (F carries the rest)
    x = np.linspace(-2, 2, 17)
    np.testing.assert_allclose(
        prefactor_log_derivative(family.pct(0), family.mass, x), family.log_prefactor(x)[1], rtol=1e-12, atol=1e-12
    )


def test_domain_and_degenerate_errors():
    half = MassProfile(lambda x: x, lambda x: np.ones_like(x), lambda x: np.zeros_like(x), np.log, (0.0, math.inf))
    flat = PctData(
        g=lambda x: x, g1=lambda x: np.zeros_like(x), g2=lambda x: x, g3=lambda x: x,
        Q=lambda g: g, Qdot=lambda g: g, R=lambda g: g,
    )
    with pytest.raises(ValueError, match="x outside family domain"):
        pct_rhs(flat, half, -1.0)
    with pytest.raises(ValueError, match="change of variable degenerate"):
        pct_rhs(flat, half, np.array([1.0]))
    with pytest.raises(ValueError, match="change of variable degenerate"):
        prefactor_log_derivative(flat, half, np.array([1.0]))


def test_boundary_examples():
    assert boundary_condition_ok(jacobi_es(1.0, 1.0, 1.0), 0)
    assert not boundary_condition_ok(jacobi_es(1.0, -0.75, 1.0, validate=False), 0)
    assert boundary_condition_ok(qes(1.0, -1.0, 1.0, 1), 0)


@pytest.mark.parametrize("a", [-0.75, -0.25, 0.25])
@pytest.mark.parametrize("b", [-0.75, -0.25, 1.0])
def test_boundary_scan_jacobi(a, b):
    fam = jacobi_es(1.3, a, b, validate=False)
    expected = a > -0.5 and b > -0.5
    assert all(boundary_condition_ok(fam, n) == expected for n in range(3))


@pytest.mark.parametrize("a", [-0.75, -0.25, 0.25])
def test_boundary_scan_laguerre(a):
    fam = laguerre_es(0.8, a, validate=False)
    assert all(boundary_condition_ok(fam, n) == (a > -0.5) for n in range(3))


@pytest.mark.parametrize("k", [1, 2, 3])
@pytest.mark.parametrize("offset", [-0.25, 0.25])
def test_boundary_scan_qes(k, offset):
    a = -2 * k + 1.5 + offset
    fam = qes(1.0, a, 1.0, k, validate=False)
    assert all(boundary_condition_ok(fam, n) == (offset < 0) for n in range(k + 1))


@pytest.mark.parametrize("amb", [ZHU_KROEMER, BEN_DANIEL_DUKE, AmbiguityParams(0.4, -1.7)], ids=["zk", "bdd", "other"])
def test_initial_potential_matches_generic_shift(family, amb):
    x = np.linspace(-3, 3, 31) / family.q
    generic = family.veff(x) - ambiguity_shift(family.mass, amb, x)
    scale = np.maximum(1.0, np.abs(family.veff(x)))
    assert np.max(np.abs(family.initial_potential(amb, x) - generic) / scale) <= 1e-12

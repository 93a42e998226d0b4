import json
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate

from pdem_spectra import (
    FamilySpec,
    InadmissibleParameters,
    Kind,
    jacobi_es,
    laguerre_es,
    make_family,
    qes,
)
from pdem_spectra.numerics import analytic_residual, count_nodes

from conftest import n_levels


def test_mass_examples():
    assert jacobi_es(1.0, 1.0, 1.0).mass.value(0.0) == 1.0
    lag = laguerre_es(1.0, 1.0)
    assert lag.mass.value(0.0) == 1.0
    assert lag.mass.value(math.log(2)) == pytest.approx(0.5, rel=1e-15)


def test_veff_examples():
    x = np.linspace(-5, 5, 11)
    np.testing.assert_allclose(jacobi_es(1.0, 1.0, 1.0).veff(x), 0.0, atol=1e-15)
    assert laguerre_es(1.0, 1.0).veff(0.0) == pytest.approx(0.25, rel=1e-15)
    assert qes(1.0, -1.0, 1.0, 1).veff(0.0) == pytest.approx(-2.0, rel=1e-15)


def test_energy_examples():
    assert jacobi_es(1.0, 0.0, 0.0).energy(0) == 0.0
    assert jacobi_es(1.0, 1.0, 1.0).energy(1) == 6.0
    fam = qes(1.0, -1.0, 2.0, 1)
    assert [fam.energy(0), fam.energy(1)] == pytest.approx([-2.0, 2.0], rel=1e-12)


def test_psi_examples():
    assert jacobi_es(1.0, 1.0, 1.0).psi(0, 0.0)[0] == pytest.approx(1.0, rel=1e-15)
    assert laguerre_es(1.0, 1.0).psi(0, 0.0)[0] == pytest.approx(math.exp(-0.5), rel=1e-15)
    fam = qes(1.0, -1.0, 2.0, 1)
    x = np.array([math.log(2) - 1e-6, math.log(2) + 1e-6])
    p = fam.psi(1, x)[0]
    assert p[0] * p[1] < 0
    assert count_nodes(fam.psi(1, np.linspace(-3, 10, 2001))[0]) == 1


def test_derivatives_by_differences(family):
    h = 1e-4
    x = np.linspace(-1.5, 1.5, 13) / family.q
    for n in range(n_levels(family, 3)):
        p, d1, d2 = family.psi(n, x)
        fd1 = (family.psi(n, x + h)[0] - family.psi(n, x - h)[0]) / (2 * h)
        fd2 = (family.psi(n, x + h)[1] - family.psi(n, x - h)[1]) / (2 * h)
        scale = np.max(np.abs(p))
        np.testing.assert_allclose(d1, fd1, rtol=1e-6, atol=1e-6 * scale * family.q)
        np.testing.assert_allclose(d2, fd2, rtol=1e-6, atol=1e-6 * scale * family.q**2)


def test_spectral_residual(family):
    tol = 1e-7 if family.kind is Kind.QES and family.spec.k >= 3 else 1e-8
    for n in range(n_levels(family)):
        assert analytic_residual(family.veff, family.mass, family.level(n)) <= tol


def test_wrong_energy_detected():
    fam = jacobi_es(1.0, 1.2, 0.8)
    lv = fam.level(1)
    shifted = type(lv)(lv.n, lv.energy + 0.1, lv.evaluate, lv.norm, lv.support)
    assert analytic_residual(fam.veff, fam.mass, shifted) >= 0.1 * 0.99


def test_nodes(family):
    count = 7 if family.n_levels is None else family.n_levels
    for n in range(count):
        lo, hi = family.level(n).support
        assert count_nodes(family.psi(n, np.linspace(lo, hi, 4001))[0]) == n


def test_energies_increase(family):
    e = [family.energy(n) for n in range(n_levels(family, 8))]
    assert np.all(np.diff(e) > 0)


def test_normalization(family):
    for n in range(n_levels(family, 3)):
        lv = family.level(n)
        val, _ = integrate.quad(lambda t: lv.normalized(t) ** 2, *lv.support, limit=400)
        assert val == pytest.approx(1.0, rel=1e-8)


def test_qes_window():
    fam = qes(1.0, -3.0, 1.0, 2)
    assert fam.n_levels == 3
    with pytest.raises(ValueError, match="level outside QES window"):
        fam.energy(3)
    with pytest.raises(ValueError):
        jacobi_es().energy(-1)


def test_admissibility_gates():
    assert qes(1.0, -1.0, 1.0, 1).n_levels == 2
    with pytest.raises(InadmissibleParameters, match=r"a < -2k \+ 3/2"):
        qes(1.0, -0.4, 1.0, 1)
    with pytest.raises(InadmissibleParameters, match=r"a < -2k \+ 3/2"):
        qes(1.0, -2.4, 1.0, 2)
    qes(1.0, -2.6, 1.0, 2)
    with pytest.raises(InadmissibleParameters):
        jacobi_es(1.0, -0.75, 0.0)
    with pytest.raises(InadmissibleParameters):
        laguerre_es(1.0, -0.6)
    with pytest.raises(ValueError):
        jacobi_es(q=0.0)
    with pytest.raises(ValueError):
        qes(1.0, -1.0, -1.0, 1)


def test_xi_must_be_positive_even_unvalidated():
    with pytest.raises(ValueError):
        qes(1.0, -1.0, 0.0, 1, validate=False)


def test_spec_validation():
    with pytest.raises(ValueError, match="unknown field"):
        FamilySpec.from_dict({"family": "jacobi_es", "q": 1, "a": 0, "b": 0, "xi": 1})
    with pytest.raises(ValueError):
        FamilySpec.from_dict({"family": "qes", "q": 1, "a": -1, "xi": 1, "k": 1.5})
    with pytest.raises(ValueError):
        FamilySpec.from_dict({"family": "bessel", "q": 1})
    with pytest.raises(ValueError):
        FamilySpec.from_dict({"q": 1})
    with pytest.raises(ValueError, match="needs parameter b"):
        FamilySpec(Kind.JACOBI_ES, a=1.0)


finite = st.floats(-50, 50, allow_nan=False)


@st.composite
def specs(draw):
    kind = draw(st.sampled_from(list(Kind)))
    kw = dict(q=draw(st.floats(0.01, 10)), a=draw(finite), v0=draw(finite))
    if kind is Kind.JACOBI_ES:
        kw["b"] = draw(finite)
    if kind is Kind.QES:
        kw["xi"] = draw(st.floats(0.01, 10))
        kw["k"] = draw(st.integers(1, 6))
    return FamilySpec(kind, **kw)


@settings(max_examples=200, deadline=None)
@given(specs())
def test_spec_round_trip(spec):
    again = FamilySpec.from_dict(json.loads(json.dumps(spec.to_dict())))
    assert again == spec


def test_make_family_from_dict():
    fam = make_family({"family": "laguerre_es", "q": 2, "a": 1, "v0": 0.5})
    assert fam.kind is Kind.LAGUERRE_ES
    assert fam.energy(0) == pytest.approx(4 * 1.0 + 0.5)


def test_long_double_evaluation(family):
    x = np.linspace(np.longdouble(-1), np.longdouble(1), 5)
    for arr in family.psi(0, x) + (family.veff(x), family.mass.value(x)):
        assert arr.dtype == np.longdouble

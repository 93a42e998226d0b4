import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.special import eval_genlaguerre, eval_jacobi

from pdem_spectra.orthopoly import jacobi, jacobi_eval, laguerre, laguerre_eval


# explicit-sum oracles in 40-digit arithmetic (the alternating sums cancel badly in double)
mp.mp.dps = 40


@np.vectorize
def jacobi_series(n, a, b, x):
    a, b, x = mp.mpf(a), mp.mpf(b), mp.mpf(x)
    return float(mp.fsum(
        mp.binomial(n + a, n - s) * mp.binomial(n + b, s) * ((x - 1) / 2) ** s * ((x + 1) / 2) ** (n - s)
        for s in range(n + 1)
    ))


@np.vectorize
def laguerre_series(n, a, x):
    a, x = mp.mpf(a), mp.mpf(x)
    return float(mp.fsum((-1) ** i * mp.binomial(n + a, n - i) * x**i / mp.factorial(i) for i in range(n + 1)))


def test_degree_zero():
    for ev in (jacobi_eval(0, 0.3, 1.1, 0.4), laguerre_eval(0, 2.0, 3.0)):
        assert ev.value == 1.0 and ev.d1 == 0.0 and ev.d2 == 0.0


def test_low_degree_values():
    assert jacobi_eval(1, 1.0, 1.0, 0.5).value == pytest.approx(1.0, abs=1e-15)
    assert laguerre_eval(1, 0.0, 1.0).value == pytest.approx(0.0, abs=1e-15)


def test_series_examples():
    assert jacobi(4, 0.3, -0.2, 0.7) == pytest.approx(jacobi_series(4, 0.3, -0.2, 0.7), rel=1e-12)
    assert laguerre(5, 1.5, 2.3) == pytest.approx(laguerre_series(5, 1.5, 2.3), rel=1e-12)


@pytest.mark.parametrize("n", range(9))
def test_recurrence_vs_series(n):
    x = np.linspace(-0.99, 0.99, 41)
    for a, b in [(0.0, 0.0), (1.2, 0.8), (-0.6, 2.5), (3.0, -0.9)]:
        ref = jacobi_series(n, a, b, x)
        np.testing.assert_allclose(jacobi(n, a, b, x), ref, rtol=1e-12, atol=1e-12 * np.max(np.abs(ref)))
    g = np.linspace(0.0, 20.0, 41)
    for a in [0.0, 1.0, -0.5, 2.7]:
        ref = laguerre_series(n, a, g)
        np.testing.assert_allclose(laguerre(n, a, g), ref, rtol=1e-12, atol=1e-12 * np.max(np.abs(ref)))


def test_matches_scipy():
    x = np.linspace(-1, 1, 17)
    np.testing.assert_allclose(jacobi(6, 0.4, 1.3, x), eval_jacobi(6, 0.4, 1.3, x), rtol=1e-12, atol=1e-13)
    g = np.linspace(0, 15, 17)
    np.testing.assert_allclose(laguerre(7, 0.6, g), eval_genlaguerre(7, 0.6, g), rtol=1e-11, atol=1e-11)


def test_long_double_passthrough():
    g = np.linspace(np.longdouble(-0.5), np.longdouble(0.5), 5)
    assert jacobi_eval(3, 0.5, 0.5, g).d2.dtype == np.longdouble
    assert laguerre_eval(3, 0.5, g + 1).d1.dtype == np.longdouble


def test_inadmissible_parameter():
    with pytest.raises(ValueError, match="inadmissible"):
        jacobi_eval(2, -1.0, 0.0, 0.1)
    with pytest.raises(ValueError, match="inadmissible"):
        laguerre_eval(2, -1.5, 0.1)


params = st.floats(-0.9, 3.0)


@settings(max_examples=200, deadline=None)
@given(n=st.integers(0, 8), a=params, b=params, g=st.floats(-0.99, 0.99))
def test_jacobi_ode(n, a, b, g):
    f, fd, fdd = jacobi_eval(n, a, b, g)
    terms = [(1 - g * g) * fdd, (b - a - (a + b + 2) * g) * fd, n * (n + a + b + 1) * f]
    scale = max(max(abs(t) for t in terms), 1.0)
    assert abs(sum(terms)) <= 1e-10 * scale


@settings(max_examples=200, deadline=None)
@given(n=st.integers(0, 8), a=params, g=st.floats(0.0, 20.0, exclude_min=True))
def test_laguerre_ode(n, a, g):
    f, fd, fdd = laguerre_eval(n, a, g)
    terms = [g * fdd, (a + 1 - g) * fd, n * f]
    scale = max(max(abs(t) for t in terms), 1.0)
    assert abs(sum(terms)) <= 1e-10 * scale


@settings(max_examples=100, deadline=None)
@given(n=st.integers(1, 8), a=params, b=params, g=st.floats(-0.9, 0.9))
def test_jacobi_derivative_by_differences(n, a, b, g):
    h = 1e-5
    ev = jacobi_eval(n, a, b, g)
    fd = (jacobi(n, a, b, g + h) - jacobi(n, a, b, g - h)) / (2 * h)
    assert ev.d1 == pytest.approx(fd, rel=1e-6, abs=1e-6 * max(1.0, abs(ev.value)))

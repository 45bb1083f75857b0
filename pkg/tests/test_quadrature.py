import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate as sp_integrate
from scipy import special

from glsalgebra.quadrature import QuadratureError, beta_function, gamma, integrate, log_gamma


def test_constant_on_unit_interval():
    res = integrate(lambda x: np.ones_like(x), 0.0, 1.0)
    assert res.value == pytest.approx(1.0, rel=1e-14)
    assert res.converged


def test_gaussian_density_over_line():
    z = lambda x: np.exp(-0.5 * x * x) / math.sqrt(2 * math.pi)
    assert integrate(z, -math.inf, math.inf).value == pytest.approx(1.0, rel=1e-9)


def test_beta_kernel_with_declared_singularities():
    k = lambda z: z ** (-2 / 3) * (1 - z) ** (-2 / 3)
    res = integrate(k, 0.0, 1.0, rtol=1e-10, singular=(2 / 3, 2 / 3))
    assert res.value == pytest.approx(special.beta(1 / 3, 1 / 3), rel=1e-9)
    assert res.value == pytest.approx(5.29992, abs=1e-5)


def test_power_substitution_single_endpoint():
    res = integrate(lambda z: z ** (-2 / 3), 0.0, 1.0, rtol=1e-10, singular=(2 / 3, 0.0))
    assert res.value == pytest.approx(3.0, rel=1e-10)


@pytest.mark.parametrize("decay", [1.5, 2.0, 4.0])
def test_power_tail(decay):
    res = integrate(lambda x: x ** -decay, 1.0, math.inf, rtol=1e-10, tail_decay=decay)
    assert res.value == pytest.approx(1.0 / (decay - 1.0), rel=1e-9)


def test_breakpoints_against_scipy():
    f = lambda x: np.abs(x - 0.3) + np.where(x > 0.7, 1.0, 0.0)
    ours = integrate(f, 0.0, 1.0, breakpoints=[0.3, 0.7]).value
    ref, _ = sp_integrate.quad(lambda x: abs(x - 0.3) + (x > 0.7), 0, 1, points=[0.3, 0.7])
    assert ours == pytest.approx(ref, rel=1e-10)


def test_vector_valued_integrand():
    ps = np.array([1.0, 2.0, 3.0])
    res = integrate(lambda x: x[:, None] ** ps[None, :], 0.0, 1.0)
    np.testing.assert_allclose(res.value, 1.0 / (ps + 1.0), rtol=1e-12)


def test_complex_integrand():
    res = integrate(lambda x: np.exp(2j * np.pi * x), 0.0, 0.25)
    expected = (np.exp(0.5j * np.pi) - 1.0) / (2j * np.pi)
    assert abs(res.value - expected) < 1e-13


def test_nan_integrand_is_hard_error():
    with pytest.raises(QuadratureError):
        integrate(lambda x: np.full_like(x, np.nan), 0.0, 1.0)


def test_budget_exhaustion_is_flagged():
    res = integrate(lambda x: np.sin(1.0 / x), 1e-6, 1.0, rtol=1e-13, max_intervals=8)
    assert not res.converged
    assert math.isfinite(res.value)


@pytest.mark.parametrize("a,b,expected", [(1.0, 1.0, 1.0), (2.0, 3.0, 1.0 / 12.0)])
def test_beta_small_cases(a, b, expected):
    assert beta_function(a, b) == pytest.approx(expected, rel=1e-14)


@settings(max_examples=50, deadline=None)
@given(st.floats(0.05, 20.0), st.floats(0.05, 20.0))
def test_beta_symmetric_and_matches_scipy(a, b):
    assert beta_function(a, b) == beta_function(b, a)
    assert beta_function(a, b) == pytest.approx(special.beta(a, b), rel=1e-12)


@pytest.mark.parametrize("x", [0.1, 1 / 3, 0.5, 1.0, 2.5, 7.0, 30.0])
def test_gamma_against_scipy(x):
    assert gamma(x) == pytest.approx(special.gamma(x), rel=1e-13)
    assert log_gamma(x) == pytest.approx(special.gammaln(x), rel=1e-12, abs=1e-14)


@settings(max_examples=30, deadline=None)
@given(st.floats(-3, 3), st.floats(-3, 3), st.integers(0, 2 ** 31 - 1))
def test_linearity(alpha, beta, seed):
    rng = np.random.default_rng(seed)
    c1, c2 = rng.uniform(0.5, 3.0, 2)
    f = lambda x: np.sin(c1 * x)
    g = lambda x: np.exp(-c2 * x * x)
    atol = 1e-13
    If = integrate(f, -1.0, 2.0, atol=atol).value
    Ig = integrate(g, -1.0, 2.0, atol=atol).value
    Ih = integrate(lambda x: alpha * f(x) + beta * g(x), -1.0, 2.0, atol=atol).value
    assert abs(Ih - alpha * If - beta * Ig) < 10 * atol + 1e-12 * (abs(alpha) + abs(beta))

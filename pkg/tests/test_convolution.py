import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate as sp_integrate
from scipy import special

from glsalgebra import (AliasingError, ConvolutionPlan, GroupDomain, Sampled, convolve_cyclic,
                        convolve_direct, convolve_grid, counterexample_h, lp_norm, make_gaussian,
                        make_indicator, make_random_mixture, sample, truncated_counterexample_h)
from glsalgebra.convolution import beta_partial

DEFAULT = GroupDomain.real_line(16.0, 4096)


class TestGrid:
    def test_gaussian_semigroup(self, z1):
        h = convolve_grid(sample(z1, DEFAULT), sample(z1, DEFAULT))
        exact = make_gaussian(math.sqrt(2.0))(DEFAULT.points())
        assert np.max(np.abs(h.values - exact)) < 1e-6

    @pytest.mark.parametrize("method", ["spectral", "direct-grid"])
    def test_hat(self, box, method):
        d = GroupDomain.real_line(4.0, 1024)
        h = convolve_grid(sample(box, d), sample(box, d), ConvolutionPlan(method))
        x = d.points()
        # two 128-node boxes: the lattice hat peaks one step before x = 1
        hat = np.clip(1.0 - np.abs(x - (1.0 - d.step)), 0.0, None)
        assert np.max(np.abs(h.values - hat)) < 1e-12
        assert lp_norm(h, 1.0) == pytest.approx(1.0, rel=1e-12)
        assert h.values.max() == pytest.approx(1.0, rel=1e-12)
        assert np.max(np.abs(h.values - np.clip(1.0 - np.abs(x - 1.0), 0.0, None))) <= d.step + 1e-12

    def test_spectral_matches_direct(self):
        d = GroupDomain.real_line(72.0, 2304)
        f, g = sample(make_random_mixture(1), d), sample(make_random_mixture(2), d)
        a = convolve_grid(f, g, ConvolutionPlan("spectral")).values
        b = convolve_grid(f, g, ConvolutionPlan("direct-grid")).values
        assert np.max(np.abs(a - b)) < 1e-12 * np.max(np.abs(b))

    def test_aliasing_detected(self):
        d = GroupDomain.real_line(4.0, 256)
        wide = sample(make_indicator(-3.0, 3.0), d)
        with pytest.raises(AliasingError):
            convolve_grid(wide, wide)

    def test_domain_mismatch(self, z1):
        with pytest.raises(ValueError):
            convolve_grid(sample(z1, DEFAULT), sample(z1, GroupDomain.real_line(16.0, 2048)))

    def test_commutative_and_young_l1(self):
        d = GroupDomain.real_line(72.0, 2304)
        f, g = sample(make_random_mixture(4), d), sample(make_random_mixture(5), d)
        fg, gf = convolve_grid(f, g), convolve_grid(g, f)
        np.testing.assert_allclose(fg.values, gf.values, rtol=0, atol=1e-13)
        assert lp_norm(fg, 1.0) == pytest.approx(lp_norm(f, 1.0) * lp_norm(g, 1.0), rel=1e-12)


class TestCyclic:
    def test_constants(self):
        np.testing.assert_allclose(convolve_cyclic(np.ones(4), np.ones(4)), np.ones(4))

    def test_two_point(self):
        np.testing.assert_allclose(convolve_cyclic([1.0, 2.0], [3.0, 4.0]), [5.5, 5.0])

    @settings(max_examples=30, deadline=None)
    @given(st.integers(1, 40), st.integers(0, 2 ** 31 - 1))
    def test_identity_impulse(self, n, seed):
        g = np.random.default_rng(seed).normal(size=n)
        e = np.zeros(n)
        e[0] = n
        np.testing.assert_allclose(convolve_cyclic(e, g), g, atol=1e-12)

    @settings(max_examples=30, deadline=None)
    @given(st.integers(1, 40), st.integers(0, 2 ** 31 - 1))
    def test_against_definition(self, n, seed):
        rng = np.random.default_rng(seed)
        f, g = rng.normal(size=n), rng.normal(size=n)
        ref = np.array([sum(f[j] * g[(k - j) % n] for j in range(n)) / n for k in range(n)])
        np.testing.assert_allclose(convolve_cyclic(f, g), ref, atol=1e-12)

    def test_sampled_round_trip(self):
        d = GroupDomain.cyclic(3)
        h = convolve_cyclic(Sampled(d, np.array([1.0, 0, 0])), Sampled(d, np.array([0, 3.0, 0])))
        assert isinstance(h, Sampled) and h.domain == d
        np.testing.assert_allclose(h.values, [0.0, 1.0, 0.0])


class TestDirect:
    @pytest.mark.parametrize("x", [-2.0, 0.0, 0.7, 3.0])
    def test_gaussian(self, z1, x):
        h = convolve_direct(z1, z1)
        assert float(h(np.array([x]))[0]) == pytest.approx(
            float(make_gaussian(math.sqrt(2.0))(np.array([x]))[0]), rel=1e-10)

    @pytest.mark.parametrize("x,expected", [(0.25, 0.25), (1.0, 1.0), (1.5, 0.5), (2.5, 0.0)])
    def test_hat(self, box, x, expected):
        assert float(convolve_direct(box, box)(np.array([x]))[0]) == pytest.approx(expected, abs=1e-12)


class TestCounterexampleKernel:
    def test_at_three_against_scipy(self):
        inner, _ = sp_integrate.quad(lambda z: z ** (-2 / 3) * (1 - z) ** (-2 / 3), 1 / 3, 2 / 3,
                                     epsabs=0, epsrel=1e-13)
        assert counterexample_h(3.0) == pytest.approx(3 ** (-1 / 3) * inner, rel=1e-10)

    @pytest.mark.parametrize("x", [1.5, 2.0])
    def test_zero_below_two(self, x):
        assert counterexample_h(x) == 0.0

    @pytest.mark.parametrize("z", [0.01, 0.3, 0.5, 0.8, 1.0])
    def test_beta_partial_against_scipy(self, z):
        ref = special.betainc(1 / 3, 1 / 3, z) * special.beta(1 / 3, 1 / 3)
        assert beta_partial(z)[0] == pytest.approx(ref, rel=1e-10)

    @pytest.mark.parametrize("x", [10.0, 1e3, 1e6])
    def test_against_incomplete_beta(self, x):
        B = special.beta(1 / 3, 1 / 3)
        tail = special.betainc(1 / 3, 1 / 3, 1 / x) * B
        assert counterexample_h(x) == pytest.approx(x ** (-1 / 3) * (B - 2 * tail), rel=1e-9)

    def test_truncation(self):
        cut = 100.0
        assert truncated_counterexample_h(50.0, cut) == pytest.approx(counterexample_h(50.0), rel=1e-12)
        assert truncated_counterexample_h(2 * cut + 1, cut) == 0.0
        direct, _ = sp_integrate.quad(lambda y: y ** (-2 / 3) * (150.0 - y) ** (-2 / 3), 50.0, 100.0,
                                      epsabs=0, epsrel=1e-12)
        assert truncated_counterexample_h(150.0, cut) == pytest.approx(direct, rel=1e-9)

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate as sp_integrate
from scipy import stats

from glsalgebra import (FamilySpec, GroupDomain, Sampled, dilate, lp_norm, make_gaussian,
                        make_indicator, make_power_tail, make_random_mixture, sample)
from glsalgebra.functions import gaussian_norm, make_zero


class TestGroupDomain:
    def test_real_line_grid(self):
        d = GroupDomain.real_line(2.0, 8)
        assert d.step == 0.5
        np.testing.assert_array_equal(d.points(), np.arange(-2.0, 2.0, 0.5))

    def test_cyclic_weights_sum_to_one(self):
        d = GroupDomain.cyclic(7)
        assert d.weight == pytest.approx(1 / 7)
        assert math.fsum(d.weights()) == pytest.approx(1.0, abs=1e-15)

    @pytest.mark.parametrize("args", [(1.0, 7), (0.0, 8), (-1.0, 8), (1.0, 0)])
    def test_bad_real_line(self, args):
        with pytest.raises(ValueError):
            GroupDomain.real_line(*args)

    def test_sampled_length_checked(self):
        with pytest.raises(ValueError):
            Sampled(GroupDomain.cyclic(4), np.ones(5))


class TestFamilies:
    @pytest.mark.parametrize("sigma,expected", [(1.0, 0.398942), (2.0, 0.199471)])
    def test_gaussian_peak(self, sigma, expected):
        value = float(make_gaussian(sigma)(np.array([0.0]))[0])
        assert value == pytest.approx(expected, abs=5e-7)
        assert value == pytest.approx(stats.norm(scale=sigma).pdf(0.0), rel=1e-15)

    def test_gaussian_unit_mass(self, z1):
        ref, _ = sp_integrate.quad(lambda x: float(z1(np.array([x]))[0]), -np.inf, np.inf)
        assert ref == pytest.approx(1.0, rel=1e-10)
        assert lp_norm(z1, 1.0) == pytest.approx(1.0, rel=1e-9)

    def test_gaussian_rejects_bad_sigma(self):
        with pytest.raises(ValueError):
            make_gaussian(0.0)

    @pytest.mark.parametrize("alpha,x,expected", [(1.5, 8.0, 0.25), (1.5, 0.5, 0.0), (2.0, 4.0, 0.5)])
    def test_power_tail_values(self, alpha, x, expected):
        assert float(make_power_tail(alpha)(np.array([x]))[0]) == pytest.approx(expected, rel=1e-15)

    @pytest.mark.parametrize("alpha", [1.0, 2.5])
    def test_power_tail_range(self, alpha):
        with pytest.raises(ValueError):
            make_power_tail(alpha)

    def test_indicator_values_and_mass(self, box):
        assert box(np.array([0.5, 2.0, 0.0, 1.0])).tolist() == [1.0, 0.0, 1.0, 0.0]
        assert lp_norm(make_indicator(0.0, 2.0), 1.0) == pytest.approx(2.0, rel=1e-12)

    def test_indicator_rejects_empty(self):
        with pytest.raises(ValueError):
            make_indicator(1.0, 1.0)

    def test_mixture_is_deterministic(self):
        a, b = make_random_mixture(11), make_random_mixture(11)
        xs = np.linspace(-10, 10, 101)
        np.testing.assert_array_equal(a(xs), b(xs))
        assert np.all(a(xs) >= 0)

    @pytest.mark.parametrize("text", ["gaussian:1", "indicator:0:1", "power-tail:1.5", "mixture:3", "mixture:3:2"])
    def test_family_parse_round_trip(self, text):
        assert FamilySpec.parse(text).text == text

    @pytest.mark.parametrize("text", ["gaussian", "nope:1", "indicator:1", "gaussian:x"])
    def test_family_parse_errors(self, text):
        with pytest.raises(ValueError):
            FamilySpec.parse(text)


class TestDilation:
    def test_identity(self, z1):
        xs = np.linspace(-5, 5, 41)
        np.testing.assert_array_equal(dilate(z1, 1.0)(xs), z1(xs))

    def test_l1_scaling(self, z1):
        assert lp_norm(dilate(z1, 2.0), 1.0) == pytest.approx(0.5, rel=1e-9)
        assert lp_norm(dilate(z1, 2.0), 1.0, exact=True) == pytest.approx(0.5, rel=1e-15)

    def test_indicator_point(self, box):
        assert float(dilate(box, 2.0)(np.array([0.4]))[0]) == 1.0

    @pytest.mark.parametrize("lam", [0.0, -1.0])
    def test_rejects_nonpositive(self, z1, lam):
        with pytest.raises(ValueError):
            dilate(z1, lam)

    @settings(max_examples=40, deadline=None)
    @given(st.floats(0.1, 10.0), st.floats(0.1, 10.0), st.integers(0, 2 ** 31 - 1))
    def test_composition(self, l1, l2, seed):
        f = make_random_mixture(seed % 1000)
        xs = np.random.default_rng(seed).uniform(-20, 20, 100)
        np.testing.assert_allclose(dilate(dilate(f, l1), l2)(xs), dilate(f, l1 * l2)(xs),
                                   rtol=1e-12, atol=1e-12)


class TestSampling:
    def test_gaussian_peak_on_grid(self, z1):
        s = sample(z1, GroupDomain.real_line(8.0, 1024))
        assert s.values.max() == pytest.approx(0.398942, abs=5e-7)
        assert s.domain.points()[int(np.argmax(s.values))] == 0.0

    def test_zero(self):
        assert not np.any(sample(make_zero(), GroupDomain.real_line(2.0, 16)).values)

    def test_indicator_half_open(self, box):
        s = sample(box, GroupDomain.real_line(2.0, 8))
        assert s.values.tolist() == [0, 0, 0, 0, 1, 1, 0, 0]

    def test_reproduces_analytic_values(self):
        f = make_random_mixture(5)
        d = GroupDomain.real_line(16.0, 512)
        np.testing.assert_array_equal(sample(f, d).values, f(d.points()))

    def test_cyclic_rejected(self, z1):
        with pytest.raises(ValueError):
            sample(z1, GroupDomain.cyclic(8))


@pytest.mark.parametrize("sigma", [0.5, 1.0, 3.0])
@pytest.mark.parametrize("p", [1.0, 1.5, 2.0, 7.0, 64.0])
def test_gaussian_quadrature_matches_oracle(sigma, p):
    f = make_gaussian(sigma)
    assert lp_norm(f, p) == pytest.approx(gaussian_norm(sigma, p), rel=1e-6)


@pytest.mark.parametrize("p", [1.0, 2.0, 5.0])
def test_gaussian_norm_against_scipy(p):
    ref, _ = sp_integrate.quad(lambda x: stats.norm.pdf(x, scale=1.5) ** p, -np.inf, np.inf)
    assert gaussian_norm(1.5, p) == pytest.approx(ref ** (1 / p), rel=1e-9)

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate as sp_integrate

from glsalgebra import (DegenerateSpace, GroupDomain, PsiClass, PsiSpec, Sampled,
                        degenerate_psi_check, grand_norm, lp_norm, make_gaussian,
                        make_power_tail, make_random_mixture, psi_eval, sample,
                        small_lebesgue_norm)
from glsalgebra.functions import add, gaussian_norm, scale
from glsalgebra.norms import golden_max, ratio, sup_on_nodes

MIXTURE_GRID = GroupDomain.real_line(72.0, 2304)


def _quad_norm(f, p):
    lo, hi = f.window(p)
    pts = [b for b in f.breakpoints if lo < b < hi]
    val, _ = sp_integrate.quad(lambda x: abs(float(f(np.array([x]))[0])) ** p, lo, hi,
                               points=pts or None, limit=500, epsabs=0, epsrel=1e-12)
    return val ** (1.0 / p)


class TestLpNorm:
    @pytest.mark.parametrize("p", [1.0, 2.0, 3.5, 10.0])
    def test_gaussian_closed_form(self, z1, p):
        assert lp_norm(z1, p) == pytest.approx(gaussian_norm(1.0, p), rel=1e-9)
        assert lp_norm(z1, p, exact=True) == gaussian_norm(1.0, p)

    @pytest.mark.parametrize("p", [1.0, 2.0, 3.0, math.inf])
    def test_unit_indicator(self, box, p):
        assert lp_norm(box, p) == pytest.approx(1.0, rel=1e-12)

    def test_power_tail_at_two(self):
        assert lp_norm(make_power_tail(1.5), 2.0) == pytest.approx(math.sqrt(3.0), rel=1e-7)

    @pytest.mark.parametrize("p", [1.0, 1.5])
    def test_power_tail_divergent(self, p):
        assert lp_norm(make_power_tail(1.5), p) == math.inf

    @pytest.mark.parametrize("seed", [0, 1, 2])
    @pytest.mark.parametrize("p", [1.0, 2.5, 6.0])
    def test_mixture_against_scipy(self, seed, p):
        f = make_random_mixture(seed)
        assert lp_norm(f, p) == pytest.approx(_quad_norm(f, p), rel=1e-7)

    def test_sup_norm_of_mixture(self):
        f = make_random_mixture(3)
        xs = np.linspace(-30, 30, 200001)
        assert lp_norm(f, math.inf) == pytest.approx(float(np.max(f(xs))), rel=1e-6)

    def test_sampled_norm_is_weighted_sum(self):
        d = GroupDomain.cyclic(2)
        f = Sampled(d, np.array([1.0, 2.0]))
        assert lp_norm(f, 1.0) == pytest.approx(1.5)
        assert lp_norm(f, 2.0) == pytest.approx(math.sqrt(2.5))
        assert lp_norm(f, math.inf) == 2.0

    def test_rejects_small_p(self, z1):
        with pytest.raises(ValueError):
            lp_norm(z1, 0.5)


class TestPsi:
    @pytest.mark.parametrize("spec", [PsiSpec.critical(3.0, 0.7), PsiSpec.gaussian(2.0),
                                      PsiSpec.gaussian(1.0), PsiSpec.power_m(2.0)])
    def test_normalized_at_one(self, spec):
        assert psi_eval(spec, 1.0) == pytest.approx(1.0, rel=1e-15)
        assert degenerate_psi_check(spec) is PsiClass.NORMALIZED

    def test_gaussian_limit(self):
        assert psi_eval(PsiSpec.gaussian(1.0), math.inf) == pytest.approx(0.398942, abs=5e-7)

    def test_power_m(self):
        assert psi_eval(PsiSpec.power_m(2.0), 9.0) == pytest.approx(3.0)

    def test_critical_domain(self):
        spec = PsiSpec.critical(4.0, 0.5)
        assert psi_eval(spec, 3.0) == pytest.approx(math.sqrt(3.0))
        with pytest.raises(ValueError):
            psi_eval(spec, 4.0)

    def test_extremal(self):
        spec = PsiSpec.extremal(2.0)
        assert psi_eval(spec, 2.0) == 1.0
        assert psi_eval(spec, 1.0) == math.inf

    @pytest.mark.parametrize("p,expected", [(1.0, math.inf), (1.5, math.inf), (2.0, math.sqrt(3.0)),
                                            (3.0, 1.0)])
    def test_tilde(self, p, expected):
        assert psi_eval(PsiSpec.tilde(), p) == pytest.approx(expected, rel=1e-15)

    def test_classification(self):
        assert degenerate_psi_check(PsiSpec.tilde()) is PsiClass.INFINITE_AT_ONE
        assert degenerate_psi_check(PsiSpec.table([1.0, 2.0], [0.0, 1.0])) is PsiClass.DEGENERATE
        assert degenerate_psi_check(PsiSpec.table([1.0, 2.0], [2.0, 1.0])) is PsiClass.POSITIVE_UNNORMALIZED

    def test_natural_tracks_norms(self, z1):
        spec = PsiSpec.natural(z1, exact=True)
        assert psi_eval(spec, 3.0) == gaussian_norm(1.0, 3.0)


class TestRatio:
    @pytest.mark.parametrize("num,den,expected", [
        (2.0, math.inf, 0.0), (math.inf, 2.0, math.inf), (0.0, 0.0, 0.0), (3.0, 2.0, 1.5)])
    def test_extended(self, num, den, expected):
        assert ratio(num, den) == (expected, False)

    def test_indeterminate(self):
        value, bad = ratio(math.inf, math.inf)
        assert bad and math.isnan(value)


def test_golden_max_finds_interior_peak():
    x, v, _ = golden_max(lambda t: -(t - 0.3) ** 2, 0.0, 1.0, 1e-10)
    assert x == pytest.approx(0.3, abs=1e-8)
    assert v == pytest.approx(0.0, abs=1e-15)


class TestGrandNorm:
    def test_natural_normalization_exact(self, z1):
        res = grand_norm(z1, PsiSpec.gaussian(1.0), exact=True)
        assert res.value == pytest.approx(1.0, abs=1e-12)
        assert res.converged

    def test_natural_normalization_quadrature(self, z1):
        assert grand_norm(z1, PsiSpec.gaussian(1.0)).value == pytest.approx(1.0, abs=1e-6)

    def test_wider_gaussian_peaks_at_one(self):
        res = grand_norm(make_gaussian(math.sqrt(2.0)), PsiSpec.gaussian(1.0), exact=True)
        assert res.value == pytest.approx(1.0, abs=1e-12)
        assert res.p_star == pytest.approx(1.0)

    def test_extremal_reduces_to_lp(self, box):
        assert grand_norm(box, PsiSpec.extremal(2.0)).value == pytest.approx(1.0, rel=1e-12)

    def test_degenerate_raises(self, z1):
        with pytest.raises(DegenerateSpace):
            grand_norm(z1, PsiSpec.table([1.0, 2.0], [0.0, 1.0]))

    def test_tilde_natural_function(self):
        res = grand_norm(make_power_tail(1.5), PsiSpec.tilde(), exact=True)
        assert res.value == pytest.approx(1.0, abs=1e-12)

    def test_finite_b(self, z1):
        spec = PsiSpec.critical(2.0, 0.5)
        res = grand_norm(z1, spec)
        ps = np.linspace(1.0, 2.0 - 1e-9, 2001)
        brute = max(gaussian_norm(1.0, p) / psi_eval(spec, p) for p in ps)
        assert res.value == pytest.approx(brute, rel=1e-6)
        assert res.p_max < 2.0

    def test_result_dict(self, z1):
        d = grand_norm(z1, PsiSpec.power_m(2.0), exact=True).as_dict()
        for key in ("value", "p_star", "converged", "tail_bound"):
            assert key in d


class TestSmallLebesgue:
    def test_indicator_theta_zero(self, box):
        assert small_lebesgue_norm(box, 2.0, 0.0).value == pytest.approx(1.0, rel=1e-9)

    def test_gaussian_theta_zero(self, z1):
        assert small_lebesgue_norm(z1, 2.0, 0.0, exact=True).value == pytest.approx(1.0, rel=1e-9)

    @pytest.mark.parametrize("sigma", [0.5, 1.0, 2.0, 4.0])
    def test_equivalent_to_critical(self, sigma):
        f = make_gaussian(sigma)
        small = small_lebesgue_norm(f, 2.0, 1.0, exact=True).value
        grand = grand_norm(f, PsiSpec.critical(2.0, 0.5), exact=True).value
        assert math.isfinite(small)
        assert 0.1 < small / grand < 10.0

    def test_rejects_bad_b(self, z1):
        with pytest.raises(ValueError):
            small_lebesgue_norm(z1, 1.0, 0.0)


SPECS = [PsiSpec.gaussian(1.0), PsiSpec.power_m(2.0), PsiSpec.critical(4.0, 0.5)]


def _sampled(seed):
    return sample(make_random_mixture(seed), MIXTURE_GRID)


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10 ** 6), st.floats(0.1, 10.0), st.sampled_from(SPECS))
def test_homogeneity(seed, c, spec):
    f = _sampled(seed)
    a = grand_norm(scale(f, c), spec).value
    assert a == pytest.approx(c * grand_norm(f, spec).value, rel=1e-9)


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(0, 10 ** 6), st.sampled_from(SPECS))
def test_triangle_inequality(s1, s2, spec):
    f, g = _sampled(s1), _sampled(s2)
    fg = add(f, g)
    nodes = sorted({p for r in (grand_norm(f, spec), grand_norm(g, spec), grand_norm(fg, spec))
                    for p in r.evaluated})
    lhs = sup_on_nodes(fg, spec, nodes)
    rhs = sup_on_nodes(f, spec, nodes) + sup_on_nodes(g, spec, nodes)
    assert lhs <= rhs * (1 + 1e-12)


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10 ** 6), st.floats(1.0, 20.0))
def test_extremal_matches_lp(seed, r):
    f = _sampled(seed)
    assert grand_norm(f, PsiSpec.extremal(r)).value == pytest.approx(lp_norm(f, r), rel=1e-14)


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10 ** 6), st.floats(1.0, 5.0))
def test_monotone_in_psi(seed, c):
    # psi <= c psi gives ||f||_{c psi} = ||f||_psi / c <= ||f||_psi
    f = _sampled(seed)
    base = PsiSpec.power_m(2.0)
    ps = np.geomspace(1.0, 64.0, 65)
    bigger = PsiSpec.table(ps, [c * psi_eval(base, p) for p in ps])
    assert sup_on_nodes(f, bigger, ps) <= sup_on_nodes(f, base, ps) * (1 + 1e-12)


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_natural_function_gives_one(seed):
    f = _sampled(seed)
    assert grand_norm(f, PsiSpec.natural(f)).value == pytest.approx(1.0, rel=1e-12)

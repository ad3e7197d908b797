"""Uncertainty-inequality tests: closed-form constants against frozen
values, profile identities, sharpness at the extremal, and strictness of
the three local theorems."""

import math

import numpy as np
import pytest
from scipy.optimize import minimize_scalar

import lbharm as lb
from lbharm.measure import SpectralSet, UNITARY, gamma_measure_of_set
from lbharm.testfamily import EXTREMAL_S4, EXTREMAL_S4_PERT, GAUSS, dilated
from lbharm.uncertainty import (
    ORACLE,
    PAPER,
    beta_block,
    beta_block_oracle,
    bound_profile,
    bound_profile_argmin,
    constant_C_critical,
    constant_K,
    constant_M,
    constant_M_displayed,
    constant_N,
    heisenberg_ratio,
    interpolation_check,
    lemma_l1_l2_ratio,
    local_critical,
    local_large_s,
    local_small_s,
    weighted_norm,
)


class TestConstants:
    def test_beta_block_ratio_is_two(self):
        # recorded discrepancy: closed form = 2 x quadrature, all alpha
        for alpha in (0.0, 0.5, 1.0):
            ctx = lb.make_context(alpha)
            assert beta_block(ctx) / beta_block_oracle(ctx) == pytest.approx(2.0, rel=1e-9)

    def test_K_examples(self, ctx0, ctx1):
        assert constant_K(ctx0, 1.0) == pytest.approx(math.sqrt(2.0), rel=1e-13)
        assert constant_K(ctx1, 1.0) > 0
        with pytest.raises(ValueError):
            constant_K(ctx0, 2.0)

    def test_K_small_s_continuity(self, ctx0):
        vals = [constant_K(ctx0, s) for s in (0.1, 0.01, 0.001)]
        # both factors approach 1 x (3a+2)/(3a+2): the limit is 1
        assert abs(vals[-1] - 1.0) < abs(vals[0] - 1.0)
        assert vals[-1] == pytest.approx(1.0, abs=0.05)

    def test_K_blows_up_at_upper_end(self, ctx1):
        d = 5.0
        vals = [constant_K(ctx1, s) for s in (4.0, 4.9, 4.99)]
        assert vals[0] < vals[1] < vals[2]

    def test_N_values(self, ctx0):
        n_paper, n_oracle = constant_N(ctx0, 4.0)
        assert n_paper == pytest.approx(math.pi / 16.0, rel=1e-13)
        assert n_oracle == pytest.approx(math.pi / 32.0, rel=1e-6)
        with pytest.raises(ValueError):
            constant_N(ctx0, 2.0)

    def test_N_monotone_in_s(self, ctx0):
        vals = [constant_N(ctx0, s)[1] for s in (3.0, 4.0, 6.0, 10.0)]
        assert vals[0] > vals[1] > vals[2] > vals[3] > 0

    def test_M_values(self, ctx0):
        assert constant_M(ctx0, 4.0, PAPER) == pytest.approx(math.sqrt(math.pi / 8.0), rel=1e-13)
        assert constant_M(ctx0, 4.0, ORACLE) == pytest.approx(math.sqrt(math.pi / 16.0), rel=1e-6)

    @pytest.mark.parametrize("alpha", [0.0, 1.0])
    @pytest.mark.parametrize("s", [4.0, 6.0])
    def test_M_matches_displayed_form(self, alpha, s):
        ctx = lb.make_context(alpha)
        if s <= 3 * alpha + 2:
            pytest.skip("out of range")
        assert constant_M(ctx, s, PAPER) == pytest.approx(
            constant_M_displayed(ctx, s), rel=1e-13)

    def test_C_values(self, ctx0, ctx1):
        assert constant_C_critical(ctx0) == pytest.approx(2.0 * math.sqrt(2.0), rel=1e-13)
        assert constant_C_critical(ctx1) > 0

    def test_C_continuous_in_alpha(self):
        alphas = np.linspace(0.0, 2.0, 21)
        vals = [constant_C_critical(lb.make_context(a)) for a in alphas]
        assert all(v > 0 for v in vals)
        diffs = np.abs(np.diff(vals))
        assert np.max(diffs) < 1.0  # no jumps on a 0.1 grid


class TestBoundProfile:
    GAMMA_E = 1.0 / math.sqrt(math.pi)

    def test_min_value_identity(self, ctx0):
        # g(r0) equals K * gamma(E)^(s/(2(3a+2))) exactly (pure algebra)
        s = 1.0
        r0 = bound_profile_argmin(ctx0, s, self.GAMMA_E)
        target = constant_K(ctx0, s) * self.GAMMA_E ** (s / 4.0)
        assert bound_profile(ctx0, s, self.GAMMA_E, r0) == pytest.approx(target, rel=1e-12)

    def test_numeric_minimizer_matches(self, ctx0):
        s = 1.0
        r0 = bound_profile_argmin(ctx0, s, self.GAMMA_E)
        res = minimize_scalar(lambda r: bound_profile(ctx0, s, self.GAMMA_E, r),
                              bracket=(r0 / 10.0, r0, 10.0 * r0), method="golden",
                              options={"xtol": 1e-12})
        assert res.x == pytest.approx(r0, rel=1e-6)

    def test_convexity_on_interval(self, ctx0):
        s = 1.0
        r0 = bound_profile_argmin(ctx0, s, self.GAMMA_E)
        rs = np.linspace(r0 / 10.0, 10.0 * r0, 101)
        g = np.array([bound_profile(ctx0, s, self.GAMMA_E, r) for r in rs])
        assert np.all(np.diff(g, 2) >= -1e-12 * np.max(g))

    def test_domain(self, ctx0):
        with pytest.raises(ValueError):
            bound_profile(ctx0, 3.0, 1.0, 1.0)
        with pytest.raises(ValueError):
            bound_profile_argmin(ctx0, 1.0, -1.0)


class TestHeisenberg:
    def test_positive_ratio(self, plan0):
        rep = heisenberg_ratio(plan0, GAUSS, 1.0, 1.0)
        assert rep.ratio_paper > 0
        assert rep.strict  # positive lower bound observed

    def test_scaling_invariance(self, plan0):
        rep1 = heisenberg_ratio(plan0, GAUSS, 1.0, 1.0)
        scaled = lb.testfamily.TestFunction("scaled", lambda x, t: 4.2 * GAUSS(x, t))
        rep2 = heisenberg_ratio(plan0, scaled, 1.0, 1.0)
        assert rep2.ratio_paper == pytest.approx(rep1.ratio_paper, rel=1e-12)

    def test_dilation_invariance(self, ctx0):
        # compressing by r = 1/2 doubles the frequency support, so run the
        # check on a plan with a doubled spectral window
        p = lb.default_plan(ctx0, lambda_max=24.0, panels=16)
        base = heisenberg_ratio(p, GAUSS, 1.0, 1.0).ratio_paper
        for r in (0.5, 2.0):
            fr = dilated(GAUSS, r, 0.0)
            ratio = heisenberg_ratio(p, fr, 1.0, 1.0).ratio_paper
            assert ratio == pytest.approx(base, rel=1e-3)

    def test_zero_function_rejected(self, plan0):
        zero = lb.testfamily.TestFunction(
            "zero", lambda x, t: np.zeros_like(np.asarray(x, dtype=float)))
        with pytest.raises(ValueError):
            heisenberg_ratio(plan0, zero, 1.0, 1.0)


class TestInterpolation:
    def test_gaussian(self, plan0):
        rep = interpolation_check(plan0.space_grid, GAUSS, 2.0)
        assert rep.ratio_paper <= 1.0

    def test_concentrated_bump(self, plan0):
        bump = lb.testfamily.TestFunction(
            "bump", lambda x, t: np.exp(-40.0 * ((np.asarray(x) - 1.0) ** 2
                                                 + (np.asarray(t) - 1.0) ** 2)))
        rep = interpolation_check(plan0.space_grid, bump, 2.0)
        assert rep.ratio_paper <= 1.0

    def test_strictness_for_smooth_family(self, plan0):
        for member in (GAUSS, lb.testfamily.GAUSS_WIDE, lb.testfamily.GAUSS_NARROW):
            rep = interpolation_check(plan0.space_grid, member, 2.0)
            assert rep.ratio_paper < 1.0

    def test_domain(self, plan0):
        with pytest.raises(ValueError):
            interpolation_check(plan0.space_grid, GAUSS, 1.0)


E_SMALL = SpectralSet(0.0, 1.0, (0, 1, 2, 3, 4))


class TestLocalSmall:
    def test_gaussian_strict(self, plan0):
        rep = local_small_s(plan0, GAUSS, E_SMALL, 1.0)
        assert rep.strict
        assert rep.ratio_oracle < 1.0
        # constant relation: oracle K is the paper K scaled by 2^(-s/(2(3a+2)))
        assert rep.rhs_paper / rep.rhs_oracle == pytest.approx(2.0 ** 0.25, rel=1e-8)

    def test_shrinking_E(self, plan0):
        ratios = []
        for hi in (1.0, 0.5, 0.1):
            E = SpectralSet(0.0, hi, (0, 1, 2, 3, 4))
            rep = local_small_s(plan0, GAUSS, E, 1.0)
            assert rep.strict
            ratios.append(rep.ratio_oracle)
        assert all(r < 1.0 for r in ratios)

    def test_zero_function_rejected(self, plan0):
        zero = lb.testfamily.TestFunction(
            "zero", lambda x, t: np.zeros_like(np.asarray(x, dtype=float)))
        with pytest.raises(ValueError):
            local_small_s(plan0, zero, E_SMALL, 1.0)

    def test_out_of_range_s(self, plan0):
        with pytest.raises(ValueError):
            local_small_s(plan0, GAUSS, E_SMALL, 2.0)


class TestLemmaMoment:
    def test_extremal_equality(self, graded0):
        rep = lemma_l1_l2_ratio(graded0, EXTREMAL_S4, 4.0, tail_decay_power=12.0)
        # Cauchy-Schwarz form is an equality at the extremal with the oracle N
        assert rep.extra["cs_ratio_oracle"] == pytest.approx(1.0, abs=1e-4)
        # and the optimized form has oracle ratio 1 (the dilation optimum is r = 1)
        assert rep.ratio_oracle == pytest.approx(1.0, abs=1e-4)

    def test_perturbed_strictly_below(self, graded0):
        rep = lemma_l1_l2_ratio(graded0, EXTREMAL_S4_PERT, 4.0)
        assert rep.ratio_oracle < 1.0 - 1e-3

    def test_dilation_invariance(self, graded0):
        base = lemma_l1_l2_ratio(graded0, EXTREMAL_S4, 4.0).ratio_oracle
        for r in (0.5, 2.0):
            fr = dilated(EXTREMAL_S4, r, 0.0)
            ratio = lemma_l1_l2_ratio(graded0, fr, 4.0).ratio_oracle
            assert ratio == pytest.approx(base, rel=1e-3)

    def test_out_of_range_s(self, graded0):
        with pytest.raises(ValueError):
            lemma_l1_l2_ratio(graded0, EXTREMAL_S4, 2.0)


E_LARGE = SpectralSet(0.0, 1.0, (0, 1))


class TestLocalLarge:
    def test_gaussian_strict(self, plan0, graded0):
        rep = local_large_s(plan0, plan0.space_grid, GAUSS, E_LARGE, 4.0)
        assert rep.strict

    def test_extremal_still_strict(self, plan0, graded0):
        rep = local_large_s(plan0, graded0, EXTREMAL_S4, E_LARGE, 4.0)
        assert rep.strict

    def test_rhs_scales_with_sqrt_gamma(self, plan0):
        E2 = SpectralSet(0.0, 1.0, (0, 1, 2, 3))  # doubles gamma(E) vs E_LARGE
        r1 = local_large_s(plan0, plan0.space_grid, GAUSS, E_LARGE, 4.0)
        r2 = local_large_s(plan0, plan0.space_grid, GAUSS, E2, 4.0)
        g1 = gamma_measure_of_set(plan0.ctx, E_LARGE, UNITARY)
        g2 = gamma_measure_of_set(plan0.ctx, E2, UNITARY)
        assert g2 == pytest.approx(2.0 * g1, rel=1e-14)
        assert r2.rhs_paper / r1.rhs_paper == pytest.approx(math.sqrt(2.0), rel=1e-12)


E_CRIT = SpectralSet(0.0, 1.0, (0,))


class TestLocalCritical:
    def test_gaussian_strict(self, plan0):
        rep = local_critical(plan0, GAUSS, E_CRIT)
        assert rep.strict

    def test_scaling_invariance(self, plan0):
        r1 = local_critical(plan0, GAUSS, E_CRIT)
        scaled = lb.testfamily.TestFunction("scaled", lambda x, t: 0.3 * GAUSS(x, t))
        r2 = local_critical(plan0, scaled, E_CRIT)
        assert r2.ratio_paper == pytest.approx(r1.ratio_paper, rel=1e-12)

    def test_proof_route_consistency(self, plan0):
        # the critical bound dominates the sub-critical bound at s = 1
        # composed with the moment interpolation at s = 2 (alpha = 0)
        ctx = plan0.ctx
        rep_crit = local_critical(plan0, GAUSS, E_CRIT)
        gamma_e = gamma_measure_of_set(ctx, E_CRIT, UNITARY)
        n2 = weighted_norm(plan0.space_grid, GAUSS, 0.0)
        m1 = weighted_norm(plan0.space_grid, GAUSS, 1.0)
        m2 = weighted_norm(plan0.space_grid, GAUSS, 2.0)
        # sub-critical route: lhs <= K gamma^(1/4) ||x| f|; interpolation:
        # ||x| f| <= 2 ||f||^(1/2) ||x|^2 f||^(1/2)
        route = (constant_K(ctx, 1.0) * gamma_e ** 0.25
                 * 2.0 * n2 ** 0.5 * m2 ** 0.5)
        assert rep_crit.rhs_paper == pytest.approx(route, rel=1e-10)
        assert rep_crit.lhs < route
        # the direct moment bound sits between the two
        direct = constant_K(ctx, 1.0) * gamma_e ** 0.25 * m1
        assert rep_crit.lhs < direct <= route * (1 + 1e-12)

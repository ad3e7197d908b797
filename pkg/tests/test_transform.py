"""Transform tests: kernel invariants, Plancherel, round trips, convolution
and Young's inequality."""

import math

import numpy as np
import pytest

import lbharm as lb
from lbharm.measure import SampledFunction, SpectralFunction, lp_norm_space
from lbharm.transform import (
    convolve_direct_alpha0,
    convolve_spectral,
    default_plan,
    plancherel_defect,
    translate_alpha0,
    young_check,
)
from lbharm.testfamily import GAUSS, GAUSS_MOD3, GAUSS_NARROW

GAUSS_MASS = 0.14104739588693907


class TestKernel:
    def test_lambda_zero_row_is_one(self, plan0):
        for m in (0, 3, 17):
            assert plan0.kernel_at(0.0, m, 1.7, 2.9) == pytest.approx(1.0, rel=1e-15)

    def test_origin_column_is_one(self, plan05):
        for lam in (0.0, 1.0, 7.5):
            for m in (0, 2, 9):
                assert plan05.kernel_at(lam, m, 0.0, 0.0) == 1.0

    def test_entries_bounded(self, plan0, plan1):
        for p in (plan0, plan1):
            for k in (0, 40, 100):
                for m in (0, 5, 30):
                    row = p.kernel_row(k, m)
                    assert np.max(np.abs(row)) <= 1.0 + 1e-12


class TestForwardInverse:
    def test_zero_maps_to_zero(self, plan0):
        z = SampledFunction(plan0.space_grid, np.zeros(plan0.space_grid.shape))
        assert np.all(plan0.forward(z).values == 0.0)
        zs = SpectralFunction(plan0.spectral_grid, np.zeros(plan0.spectral_grid.shape))
        assert np.all(plan0.inverse(zs).values == 0.0)

    def test_linearity(self, plan0):
        rng = np.random.default_rng(5)
        f = SampledFunction.from_callable(plan0.space_grid, GAUSS)
        g = SampledFunction.from_callable(plan0.space_grid, GAUSS_NARROW)
        a, b = rng.uniform(-2, 2, 2)
        lhs = plan0.forward(a * f + b * g).values
        rhs = a * plan0.forward(f).values + b * plan0.forward(g).values
        assert np.max(np.abs(lhs - rhs)) <= 1e-12 * np.max(np.abs(rhs))

    def test_lambda_zero_value_equals_mass(self, plan0):
        f = SampledFunction.from_callable(plan0.space_grid, GAUSS)
        vals = plan0.forward_at(0.0, [0, 1, 5, 12], f).ravel()
        assert np.max(np.abs(vals - vals[0])) <= 1e-14 * abs(vals[0])
        assert vals[0] == pytest.approx(GAUSS_MASS, rel=1e-12)

    @pytest.mark.parametrize("alpha", [0.0, 0.5, 1.0])
    def test_plancherel_defect(self, alpha, request):
        p = request.getfixturevalue({0.0: "plan0", 0.5: "plan05", 1.0: "plan1"}[alpha])
        f = SampledFunction.from_callable(p.space_grid, GAUSS)
        assert plancherel_defect(p, f) <= 1e-3

    def test_defect_scale_invariant(self, plan0):
        f = SampledFunction.from_callable(plan0.space_grid, GAUSS)
        assert plancherel_defect(plan0, 3.7 * f) == pytest.approx(
            plancherel_defect(plan0, f), rel=1e-10)

    def test_defect_zero_function_rejected(self, plan0):
        z = SampledFunction(plan0.space_grid, np.zeros(plan0.space_grid.shape))
        with pytest.raises(ValueError):
            plancherel_defect(plan0, z)

    def test_parseval_polarization(self, plan0):
        from lbharm.measure import inner_product_space
        f = SampledFunction.from_callable(plan0.space_grid, GAUSS)
        g = SampledFunction.from_callable(plan0.space_grid, GAUSS_MOD3)
        Ff, Fg = plan0.forward(f), plan0.forward(g)
        spec = float(np.sum(plan0.spectral_grid.weights_2d() * Ff.values * Fg.values))
        space = inner_product_space(f, g)
        assert spec == pytest.approx(space, abs=2e-3 * lp_norm_space(f, 2) * lp_norm_space(g, 2))

    def test_roundtrip_band_limited(self, plan0):
        f = SampledFunction.from_callable(plan0.space_grid, GAUSS_MOD3)
        err = lp_norm_space(plan0.inverse(plan0.forward(f)) - f, 2) / lp_norm_space(f, 2)
        assert err <= 1e-2

    def test_grid_alpha_mismatch_rejected(self, ctx0, ctx1):
        space = lb.build_space_grid(ctx0, 4.0, 4.0, 2, 2, 8)
        spectral = lb.build_spectral_grid(ctx1, 4.0, 8, 2, 8)
        with pytest.raises(ValueError):
            lb.plan(ctx0, space, spectral)


class TestConvolution:
    def test_identity_multiplier(self, plan0):
        # g whose transform is ~1 on the band acts as an approximate identity
        f = SampledFunction.from_callable(plan0.space_grid, GAUSS_MOD3)
        ones = SpectralFunction(plan0.spectral_grid,
                                np.ones(plan0.spectral_grid.shape))
        Ff = plan0.forward(f)
        conv = plan0.inverse(SpectralFunction(plan0.spectral_grid,
                                              Ff.values * ones.values))
        err = lp_norm_space(conv - f, 2) / lp_norm_space(f, 2)
        assert err <= 1e-2

    def test_commutativity(self, plan0):
        f = SampledFunction.from_callable(plan0.space_grid, GAUSS)
        g = SampledFunction.from_callable(plan0.space_grid, GAUSS_NARROW)
        fg = convolve_spectral(plan0, f, g).values
        gf = convolve_spectral(plan0, g, f).values
        assert np.max(np.abs(fg - gf)) <= 1e-12 * np.max(np.abs(fg))

    def test_reforward_product_identity(self, plan0):
        # re-analysis of the synthesized convolution reproduces the product
        # of transforms up to the frame's round-trip defect (quadrature
        # level, not exact-arithmetic level)
        f = SampledFunction.from_callable(plan0.space_grid, GAUSS)
        g = SampledFunction.from_callable(plan0.space_grid, GAUSS_NARROW)
        prod = plan0.forward(f).values * plan0.forward(g).values
        conv = plan0.inverse(SpectralFunction(plan0.spectral_grid, prod))
        re = plan0.forward(conv).values
        w = plan0.spectral_grid.weights_2d()
        err = math.sqrt(float(np.sum(w * (re - prod) ** 2)))
        ref = math.sqrt(float(np.sum(w * prod ** 2)))
        assert err <= 2e-3 * ref

    def test_zero_factor(self, plan0):
        f = SampledFunction.from_callable(plan0.space_grid, GAUSS)
        z = SampledFunction(plan0.space_grid, np.zeros(plan0.space_grid.shape))
        conv = convolve_spectral(plan0, f, z)
        assert np.max(np.abs(conv.values)) == 0.0


class TestTranslation:
    def test_translate_by_origin(self):
        val = translate_alpha0(GAUSS, 0.0, 0.0, 1.3, 0.7)
        assert val == pytest.approx(float(GAUSS(1.3, 0.7)), rel=1e-14)

    def test_translate_constant(self):
        one = lambda y, s: np.ones_like(np.asarray(y, dtype=float) * np.asarray(s, dtype=float))
        assert translate_alpha0(one, 2.0, 3.0, 0.5, 1.5) == pytest.approx(1.0, rel=1e-14)

    def test_direct_vs_spectral(self, ctx0, plan0):
        coarse = lb.build_space_grid(ctx0, 6.0, 6.0, 4, 4, 6)
        inner = lb.build_space_grid(ctx0, 8.0, 8.0, 4, 4, 12)
        direct = convolve_direct_alpha0(ctx0, GAUSS_MOD3, GAUSS,
                                        coarse.x_nodes, coarse.t_nodes, inner)
        fs = SampledFunction.from_callable(plan0.space_grid, GAUSS_MOD3)
        gs = SampledFunction.from_callable(plan0.space_grid, GAUSS)
        prod = SpectralFunction(plan0.spectral_grid,
                                plan0.forward(fs).values * plan0.forward(gs).values)
        spec = plan0.synthesize_at(prod, coarse.x_nodes, coarse.t_nodes)
        w = coarse.weights_2d()
        err = math.sqrt(float(np.sum(w * (direct - spec) ** 2)))
        ref = math.sqrt(float(np.sum(w * direct ** 2)))
        assert err <= 1e-2 * ref

    def test_alpha_nonzero_rejected(self, ctx1):
        grid = lb.build_space_grid(ctx1, 2.0, 2.0, 1, 1, 4)
        with pytest.raises(ValueError):
            convolve_direct_alpha0(ctx1, GAUSS, GAUSS, grid.x_nodes, grid.t_nodes, grid)


class TestYoung:
    @pytest.mark.parametrize("fname,gname,pe,qe,re_", [
        ("gauss-mod3", "gauss", 1.0, 1.0, 1.0),
        ("laguerre-gauss", "gauss-wide", 1.0, 1.0, 1.0),
        ("gauss", "gauss", 1.0, 2.0, 2.0),
        ("gauss", "gauss-narrow", 1.0, 2.0, 2.0),
        ("gauss-wide", "gauss-mod3", 1.0, 2.0, 2.0),
    ])
    def test_fixed_pairs(self, plan0, fname, gname, pe, qe, re_):
        f = lb.testfamily.by_name(fname)
        g = lb.testfamily.by_name(gname)
        rep = young_check(plan0, f, g, pe, qe, re_)
        assert rep.ratio_paper <= 1.0

    def test_zero_function(self, plan0):
        zero = lambda x, t: np.zeros_like(np.asarray(x, dtype=float))
        rep = young_check(plan0, GAUSS, zero, 1.0, 2.0, 2.0)
        assert rep.lhs == 0.0

    def test_exponent_relation_enforced(self, plan0):
        with pytest.raises(ValueError):
            young_check(plan0, GAUSS, GAUSS, 1.0, 2.0, 3.0)

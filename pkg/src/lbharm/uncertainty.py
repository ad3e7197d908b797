"""Uncertainty inequalities: closed-form constants, both sides of each
inequality, sharpness checks, and report assembly.

Every constant built from the recurring block

    Q = B((alpha+1)/2, (2 alpha+1)/2) / (4^(alpha+1) pi Gamma(alpha+1))

comes in two variants: 'paper', the literal closed form, and 'oracle',
with the block replaced by the value the brute-force ball-moment quadrature
actually produces.  The two differ by a constant factor (2, independent of
alpha, a and r); reports carry both and strictness is asserted against the
more demanding side.  The discrepancy is recorded, never reconciled.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from .context import AlphaContext
from .measure import (
    SampledFunction,
    SpaceGrid,
    SpectralSet,
    UNITARY,
    ball_moment,
    build_graded_space_grid,
    build_space_grid,
    dilate_normalized,
    gamma_measure_of_set,
    homogeneous_norm,
    integrate_space,
    lp_norm_space,
)
from .report import InequalityReport
from .specfun import beta_fn
from .transform import TransformPlan, spectral_restriction_norm

PAPER = "paper"
ORACLE = "oracle"


def beta_block(ctx: AlphaContext) -> float:
    """Closed-form block B((a+1)/2,(2a+1)/2) / (4^(a+1) pi Gamma(a+1))."""
    a = ctx.alpha
    return beta_fn((a + 1) / 2.0, (2 * a + 1) / 2.0) / (
        4.0 ** (a + 1) * math.pi * ctx.gamma_alpha_plus_1)


@lru_cache(maxsize=32)
def _beta_block_oracle_cached(alpha: float) -> float:
    ctx = AlphaContext(alpha)
    oracle, _ = ball_moment(ctx, 0.0, 1.0)
    return oracle * (3 * alpha + 2)


def beta_block_oracle(ctx: AlphaContext) -> float:
    """The same block re-derived from the ball-moment quadrature at a = 0,
    r = 1 (moment = block / (3 alpha + 2) there)."""
    return _beta_block_oracle_cached(ctx.alpha)


def _block(ctx: AlphaContext, variant: str) -> float:
    if variant == PAPER:
        return beta_block(ctx)
    if variant == ORACLE:
        return beta_block_oracle(ctx)
    raise ValueError(f"unknown constant variant {variant!r}")


def constant_K(ctx: AlphaContext, s: float, variant: str = PAPER) -> float:
    """Local-uncertainty constant for the sub-critical range 0 < s < 3 alpha + 2:

    K = (Q (3a+2-s) / s^2)^(s / (2(3a+2))) * (3a+2) / (3a+2-s).
    """
    d = 3 * ctx.alpha + 2
    if not (0 < s < d):
        raise ValueError("constant_K requires 0 < s < 3 alpha + 2")
    q = _block(ctx, variant)
    return (q * (d - s) / s ** 2) ** (s / (2 * d)) * d / (d - s)


@lru_cache(maxsize=64)
def _moment_integral_oracle(alpha: float, s: float) -> float:
    """integral (1 + |(x,t)|^(2s))^-1 dm_alpha by graded-panel quadrature."""
    ctx = AlphaContext(alpha)
    grid = build_graded_space_grid(ctx)
    X, T = grid.meshes()
    w = homogeneous_norm(X, T)
    vals = 1.0 / (1.0 + w ** (2 * s))
    return integrate_space(SampledFunction(grid, vals))


def radial_tail_bound(ctx: AlphaContext, decay_power: float, radius: float) -> float:
    """Bound on integral over {|(x,t)| > radius} of |(x,t)|^(-decay_power) dm_alpha,
    valid for decay_power > 6 alpha + 4 (computed with the oracle measure
    constant so it bounds what the quadrature actually integrates)."""
    d = ctx.homogeneous_dim
    if decay_power <= d:
        raise ValueError("radial_tail_bound requires decay_power > 6 alpha + 4")
    q2 = 2.0 * beta_block_oracle(ctx)
    return q2 * radius ** (d - decay_power) / (decay_power - d)


def constant_N(ctx: AlphaContext, s: float):
    """Moment-integral constant for s > 3 alpha + 2.

    Returns (paper, oracle): the closed form Q B((s-3a-2)/s, (3a+2)/s) / s
    and the direct graded-grid quadrature of the defining integral.
    """
    d = 3 * ctx.alpha + 2
    if s <= d:
        raise ValueError("constant_N requires s > 3 alpha + 2 (integrability)")
    b2 = beta_fn((s - d) / s, d / s)
    paper = beta_block(ctx) * b2 / s
    oracle = _moment_integral_oracle(ctx.alpha, s)
    return paper, oracle


def constant_M(ctx: AlphaContext, s: float, variant: str = PAPER) -> float:
    """L^1-L^2 moment-inequality constant for s > 3 alpha + 2, via

    M^2 = N * (s / (s - 3a - 2)) * ((s - 3a - 2) / (3a + 2))^((3a+2)/s),

    with N taken in the requested variant."""
    d = 3 * ctx.alpha + 2
    if s <= d:
        raise ValueError("constant_M requires s > 3 alpha + 2")
    n_paper, n_oracle = constant_N(ctx, s)
    n = n_paper if variant == PAPER else n_oracle
    if variant not in (PAPER, ORACLE):
        raise ValueError(f"unknown constant variant {variant!r}")
    m2 = n * (s / (s - d)) * ((s - d) / d) ** (d / s)
    return math.sqrt(m2)


def constant_M_displayed(ctx: AlphaContext, s: float) -> float:
    """The same closed form written directly,

    M = ( Q B((s-3a-2)/s,(3a+2)/s) / (s-3a-2) * ((s-3a-2)/(3a+2))^((3a+2)/s) )^(1/2);

    kept separate so tests can confirm the two expressions agree."""
    d = 3 * ctx.alpha + 2
    if s <= d:
        raise ValueError("constant_M_displayed requires s > 3 alpha + 2")
    b2 = beta_fn((s - d) / s, d / s)
    m2 = beta_block(ctx) * b2 / (s - d) * ((s - d) / d) ** (d / s)
    return math.sqrt(m2)


def constant_C_critical(ctx: AlphaContext, variant: str = PAPER) -> float:
    """Critical-exponent constant

    C = (3a+2)^2 (3a+1)^(-1/(2(3a+2)) - 1) * Q^(1/(2(3a+2)))."""
    d = 3 * ctx.alpha + 2
    q = _block(ctx, variant)
    return d ** 2 * (d - 1.0) ** (-1.0 / (2 * d) - 1.0) * q ** (1.0 / (2 * d))


# ---------------------------------------------------------------------------
# bound profile of the sub-critical proof
# ---------------------------------------------------------------------------

def bound_profile(ctx: AlphaContext, s: float, gamma_E: float, r: float,
                  variant: str = PAPER) -> float:
    """Profile g(r) = r^-s + sqrt(Q gamma(E) / (3a+2-s)) r^(3a+2-s), whose
    minimum value over r > 0 reproduces the sub-critical constant."""
    d = 3 * ctx.alpha + 2
    if not (0 < s < d) or r <= 0 or gamma_E <= 0:
        raise ValueError("bound_profile requires 0 < s < 3 alpha + 2, r > 0, gamma_E > 0")
    q = _block(ctx, variant)
    return r ** (-s) + math.sqrt(q * gamma_E / (d - s)) * r ** (d - s)


def bound_profile_argmin(ctx: AlphaContext, s: float, gamma_E: float,
                         variant: str = PAPER) -> float:
    """Closed-form minimizer r0 = (s/(3a+2-s))^(1/(3a+2)) (Q gamma(E)/(3a+2-s))^(-1/(2(3a+2)))."""
    d = 3 * ctx.alpha + 2
    if not (0 < s < d) or gamma_E <= 0:
        raise ValueError("bound_profile_argmin requires 0 < s < 3 alpha + 2, gamma_E > 0")
    q = _block(ctx, variant)
    return (s / (d - s)) ** (1.0 / d) * (q * gamma_E / (d - s)) ** (-1.0 / (2 * d))


# ---------------------------------------------------------------------------
# norm helpers
# ---------------------------------------------------------------------------

def weighted_norm(grid: SpaceGrid, f, s: float, p: float = 2.0) -> float:
    """|| |(x,t)|^s f ||_p with the gauge weight folded into the integrand."""
    X, T = grid.meshes()
    vals = homogeneous_norm(X, T) ** s * np.asarray(f(X, T), dtype=float)
    return lp_norm_space(SampledFunction(grid, vals), p)


def plain_norm(grid: SpaceGrid, f, p: float = 2.0) -> float:
    return lp_norm_space(SampledFunction.from_callable(grid, f), p)


def _space_probe_grid(grid: SpaceGrid) -> SpaceGrid:
    """Same window, moderately finer rule; used for grid error estimates."""
    if grid.graded:
        return build_graded_space_grid(grid.ctx, grid.x_max, grid.t_max,
                                       grid.nodes_per_panel + 8)
    return build_space_grid(grid.ctx, grid.x_max, grid.t_max, grid.panels_x,
                            grid.panels_t, grid.nodes_per_panel + 8)


def _rel_delta(a: float, b: float) -> float:
    return abs(a - b) / max(abs(a), 1e-300)


# ---------------------------------------------------------------------------
# inequality reports
# ---------------------------------------------------------------------------

def heisenberg_ratio(p: TransformPlan, f, a: float, b: float,
                     name: str = "heisenberg") -> InequalityReport:
    """Ratio of the moment product to the L^2 norm,

        || |.|^a f ||^(2b/(a+2b)) * || eig^b F f ||^(a/(a+2b))  /  ||f||_2 ,

    a scale-invariant quantity whose positive lower bound is the theorem's
    content.  The unspecified constant is handled by regression baselining,
    so rhs is the plain L^2 norm and the report direction is 'lower'.
    """
    if a <= 0 or b <= 0:
        raise ValueError("heisenberg_ratio requires a, b > 0")
    grid = p.space_grid
    fs = SampledFunction.from_callable(grid, f)
    n2 = lp_norm_space(fs, 2)
    if n2 == 0.0:
        raise ValueError("heisenberg_ratio is undefined for the zero function")
    moment = weighted_norm(grid, f, a)
    g = p.spectral_grid
    eig = 2.0 * np.outer(g.lambda_nodes, 2.0 * g.m_list + p.ctx.alpha + 1.0)
    F = p.forward(fs)
    spec_moment = math.sqrt(float(np.sum(g.weights_2d() * (eig ** b * F.values) ** 2)))
    w1 = 2 * b / (a + 2 * b)
    w2 = a / (a + 2 * b)
    lhs = moment ** w1 * spec_moment ** w2
    probe = _space_probe_grid(grid)
    est = _rel_delta(weighted_norm(probe, f, a), moment) + _rel_delta(plain_norm(probe, f), n2)
    return InequalityReport(
        name=name, lhs=lhs, rhs_paper=n2, rhs_oracle=n2, direction="lower",
        params={"alpha": p.ctx.alpha, "a": a, "b": b,
                "normalization": p.spectral_grid.normalization},
        grid_error_estimate=est,
        grid={"space": grid.meta(), "spectral": g.meta()},
        extra={"space_moment": moment, "spectral_moment": spec_moment},
    )


def interpolation_check(grid: SpaceGrid, f, s: float,
                        name: str = "interpolation") -> InequalityReport:
    """Moment interpolation || |.| f ||_2 <= s (s-1)^(1/s - 1) ||f||^(1-1/s) || |.|^s f ||^(1/s)."""
    if s <= 1:
        raise ValueError("interpolation_check requires s > 1")
    lhs = weighted_norm(grid, f, 1.0)
    n2 = plain_norm(grid, f)
    ns = weighted_norm(grid, f, s)
    const = s * (s - 1.0) ** (1.0 / s - 1.0)
    rhs = const * n2 ** (1.0 - 1.0 / s) * ns ** (1.0 / s)
    probe = _space_probe_grid(grid)
    est = (_rel_delta(weighted_norm(probe, f, 1.0), lhs)
           + _rel_delta(plain_norm(probe, f), n2)
           + _rel_delta(weighted_norm(probe, f, s), ns))
    return InequalityReport(
        name=name, lhs=lhs, rhs_paper=rhs, rhs_oracle=rhs,
        params={"alpha": grid.ctx.alpha, "s": s, "constant": const},
        grid_error_estimate=est, grid={"space": grid.meta()},
    )


def local_small_s(p: TransformPlan, f, E: SpectralSet, s: float,
                  name: str = "local-small") -> InequalityReport:
    """Sub-critical local uncertainty (0 < s < 3 alpha + 2):

    || (F f) chi_E ||_2 < K gamma(E)^(s/(2(3a+2))) || |.|^s f ||_2."""
    ctx = p.ctx
    d = 3 * ctx.alpha + 2
    if not (0 < s < d):
        raise ValueError("local_small_s requires 0 < s < 3 alpha + 2")
    fs = SampledFunction.from_callable(p.space_grid, f)
    if lp_norm_space(fs, 2) == 0.0:
        raise ValueError("local_small_s is undefined for the zero function")
    lhs = spectral_restriction_norm(p, fs, E)
    gamma_e = gamma_measure_of_set(ctx, E, UNITARY)
    moment = weighted_norm(p.space_grid, f, s)
    pw = s / (2 * d)
    rhs_paper = constant_K(ctx, s, PAPER) * gamma_e ** pw * moment
    rhs_oracle = constant_K(ctx, s, ORACLE) * gamma_e ** pw * moment
    lhs_fine = spectral_restriction_norm(p, fs, E, panels=8)
    probe = _space_probe_grid(p.space_grid)
    est = _rel_delta(lhs_fine, lhs) + _rel_delta(weighted_norm(probe, f, s), moment)
    return InequalityReport(
        name=name, lhs=lhs, rhs_paper=rhs_paper, rhs_oracle=rhs_oracle,
        params={"alpha": ctx.alpha, "s": s, "E": E.meta(), "gamma_E": gamma_e,
                "normalization": UNITARY},
        grid_error_estimate=est,
        grid={"space": p.space_grid.meta(), "spectral": p.spectral_grid.meta()},
    )


def lemma_l1_l2_ratio(grid: SpaceGrid, f, s: float, name: str = "lemma-moment",
                      tail_decay_power: float | None = None) -> InequalityReport:
    """Super-critical moment inequality (s > 3 alpha + 2):

    ||f||_1 <= M ||f||_2^(1-(3a+2)/s) || |.|^s f ||_2^((3a+2)/s),

    with the intermediate Cauchy-Schwarz form
    ||f||_1^2 <= N (||f||_2^2 + || |.|^s f ||_2^2) recorded in ``extra``.
    """
    ctx = grid.ctx
    d = 3 * ctx.alpha + 2
    if s <= d:
        raise ValueError("lemma_l1_l2_ratio requires s > 3 alpha + 2")
    n1 = plain_norm(grid, f, 1.0)
    n2 = plain_norm(grid, f, 2.0)
    ns = weighted_norm(grid, f, s, 2.0)
    theta = d / s
    rhs_paper = constant_M(ctx, s, PAPER) * n2 ** (1 - theta) * ns ** theta
    rhs_oracle = constant_M(ctx, s, ORACLE) * n2 ** (1 - theta) * ns ** theta
    n_paper, n_oracle = constant_N(ctx, s)
    cs_rhs_paper = n_paper * (n2 ** 2 + ns ** 2)
    cs_rhs_oracle = n_oracle * (n2 ** 2 + ns ** 2)
    probe = _space_probe_grid(grid)
    est = (_rel_delta(plain_norm(probe, f, 1.0), n1)
           + _rel_delta(plain_norm(probe, f, 2.0), n2)
           + _rel_delta(weighted_norm(probe, f, s, 2.0), ns))
    if tail_decay_power is not None and grid.graded:
        est += radial_tail_bound(ctx, tail_decay_power, min(grid.x_max, grid.t_max)) / max(n1, 1e-300)
    return InequalityReport(
        name=name, lhs=n1, rhs_paper=rhs_paper, rhs_oracle=rhs_oracle,
        params={"alpha": ctx.alpha, "s": s},
        grid_error_estimate=est, grid={"space": grid.meta()},
        extra={"cs_lhs": n1 ** 2, "cs_rhs_paper": cs_rhs_paper,
               "cs_rhs_oracle": cs_rhs_oracle,
               "cs_ratio_oracle": n1 ** 2 / cs_rhs_oracle,
               "norm2": n2, "moment_norm": ns},
    )


def local_large_s(p: TransformPlan, norm_grid: SpaceGrid, f, E: SpectralSet,
                  s: float, name: str = "local-large") -> InequalityReport:
    """Super-critical local uncertainty (s > 3 alpha + 2):

    || (F f) chi_E ||_2 < M gamma(E)^(1/2) ||f||_2^(1-(3a+2)/s) || |.|^s f ||_2^((3a+2)/s).

    Space norms are taken on ``norm_grid`` (graded for slowly decaying f);
    the restriction norm uses the plan's window.
    """
    ctx = p.ctx
    d = 3 * ctx.alpha + 2
    if s <= d:
        raise ValueError("local_large_s requires s > 3 alpha + 2")
    fs = SampledFunction.from_callable(p.space_grid, f)
    if lp_norm_space(fs, 2) == 0.0:
        raise ValueError("local_large_s is undefined for the zero function")
    lhs = spectral_restriction_norm(p, fs, E)
    gamma_e = gamma_measure_of_set(ctx, E, UNITARY)
    n2 = plain_norm(norm_grid, f, 2.0)
    ns = weighted_norm(norm_grid, f, s, 2.0)
    theta = d / s
    core = gamma_e ** 0.5 * n2 ** (1 - theta) * ns ** theta
    rhs_paper = constant_M(ctx, s, PAPER) * core
    rhs_oracle = constant_M(ctx, s, ORACLE) * core
    lhs_fine = spectral_restriction_norm(p, fs, E, panels=8)
    probe = _space_probe_grid(norm_grid)
    est = (_rel_delta(lhs_fine, lhs)
           + _rel_delta(plain_norm(probe, f, 2.0), n2)
           + _rel_delta(weighted_norm(probe, f, s, 2.0), ns))
    return InequalityReport(
        name=name, lhs=lhs, rhs_paper=rhs_paper, rhs_oracle=rhs_oracle,
        params={"alpha": ctx.alpha, "s": s, "E": E.meta(), "gamma_E": gamma_e,
                "normalization": UNITARY},
        grid_error_estimate=est,
        grid={"space": norm_grid.meta(), "spectral": p.spectral_grid.meta()},
    )


def local_critical(p: TransformPlan, f, E: SpectralSet,
                   name: str = "local-critical") -> InequalityReport:
    """Critical local uncertainty (s = 3 alpha + 2):

    || (F f) chi_E ||_2 < C gamma(E)^(1/(2(3a+2))) ||f||_2^((3a+1)/(3a+2))
                              || |.|^s f ||_2^(1/(3a+2))."""
    ctx = p.ctx
    d = 3 * ctx.alpha + 2
    s = d
    fs = SampledFunction.from_callable(p.space_grid, f)
    if lp_norm_space(fs, 2) == 0.0:
        raise ValueError("local_critical is undefined for the zero function")
    lhs = spectral_restriction_norm(p, fs, E)
    gamma_e = gamma_measure_of_set(ctx, E, UNITARY)
    n2 = plain_norm(p.space_grid, f, 2.0)
    ns = weighted_norm(p.space_grid, f, s, 2.0)
    core = gamma_e ** (1.0 / (2 * d)) * n2 ** ((d - 1.0) / d) * ns ** (1.0 / d)
    rhs_paper = constant_C_critical(ctx, PAPER) * core
    rhs_oracle = constant_C_critical(ctx, ORACLE) * core
    lhs_fine = spectral_restriction_norm(p, fs, E, panels=8)
    probe = _space_probe_grid(p.space_grid)
    est = (_rel_delta(lhs_fine, lhs)
           + _rel_delta(plain_norm(probe, f, 2.0), n2)
           + _rel_delta(weighted_norm(probe, f, s, 2.0), ns))
    return InequalityReport(
        name=name, lhs=lhs, rhs_paper=rhs_paper, rhs_oracle=rhs_oracle,
        params={"alpha": ctx.alpha, "s": s, "E": E.meta(), "gamma_E": gamma_e,
                "normalization": UNITARY},
        grid_error_estimate=est,
        grid={"space": p.space_grid.meta(), "spectral": p.spectral_grid.meta()},
    )

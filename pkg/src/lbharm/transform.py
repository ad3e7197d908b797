"""The Laguerre-Bessel transform: analysis, synthesis, Plancherel checks,
convolution (spectral for any alpha, direct translation-based at alpha = 0)
and Young's-inequality reports.

The kernel phi_(lam,m)(x,t) = j_{alpha-1/2}(lam t) * Lag_m^alpha(lam x^2)
separates in (x, t) for each lam, so the plan stores the two factors

    bessel[k, j]      = j_{alpha-1/2}(lam_k t_j)          (n_lambda, n_t)
    laguerre[m, k, i] = Lag_m^alpha(lam_k x_i^2)          (n_m, n_lambda, n_x)

instead of the dense (n_lambda*n_m) x (n_x*n_t) kernel matrix; transforms
are then two small tensor contractions.  ``kernel_matrix`` materializes the
dense matrix on demand for inspection.  When the Laguerre factor would
exceed ``memory_budget`` bytes it is rebuilt per lambda-chunk at each call
instead of stored.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .context import AlphaContext
from .measure import (
    SampledFunction,
    SpaceGrid,
    SpectralFunction,
    SpectralGrid,
    SpectralSet,
    UNITARY,
    build_space_grid,
    build_spectral_grid,
    gauss_legendre_composite,
    integrate_space,
    lp_norm_space,
    lp_norm_spectral,
)
from .report import InequalityReport
from .specfun import bessel_normalized, laguerre_function_table

_DEFAULT_MEMORY_BUDGET = 2 * 10 ** 8  # bytes for the stored Laguerre factor
_LAMBDA_CHUNK = 16


@dataclass
class TransformPlan:
    """Precomputed transform between a space grid and a spectral grid."""

    ctx: AlphaContext
    space_grid: SpaceGrid
    spectral_grid: SpectralGrid
    bessel: np.ndarray = field(repr=False, default=None)
    laguerre: np.ndarray = field(repr=False, default=None)  # None -> chunked mode
    memory_budget: int = _DEFAULT_MEMORY_BUDGET

    def __post_init__(self):
        if self.spectral_grid.ctx.alpha != self.ctx.alpha or self.space_grid.ctx.alpha != self.ctx.alpha:
            raise ValueError("space and spectral grids must share the plan's alpha")
        lam = self.spectral_grid.lambda_nodes
        if self.bessel is None:
            self.bessel = bessel_normalized(self.ctx.nu, np.outer(lam, self.space_grid.t_nodes))
        n_store = (self.spectral_grid.m_max + 1) * lam.size * self.space_grid.x_nodes.size
        if self.laguerre is None and n_store * 8 <= self.memory_budget:
            self.laguerre = self._laguerre_block(np.arange(lam.size))

    def _laguerre_block(self, k_idx: np.ndarray) -> np.ndarray:
        lam = self.spectral_grid.lambda_nodes[k_idx]
        u = np.outer(lam, self.space_grid.x_nodes ** 2)
        return laguerre_function_table(self.spectral_grid.m_max, self.ctx.alpha, u)

    def _lambda_chunks(self):
        n = self.spectral_grid.lambda_nodes.size
        if self.laguerre is not None:
            yield np.arange(n), self.laguerre
            return
        for lo in range(0, n, _LAMBDA_CHUNK):
            idx = np.arange(lo, min(lo + _LAMBDA_CHUNK, n))
            yield idx, self._laguerre_block(idx)

    # -- analysis / synthesis ------------------------------------------------

    def forward(self, f: SampledFunction) -> SpectralFunction:
        """Analysis: F(lam, m) = integral f phi_(lam,m) dm_alpha."""
        if f.grid.shape != self.space_grid.shape:
            raise ValueError("sampled function does not live on the plan's space grid")
        ft = f.values * self.space_grid.t_weights[None, :]
        tmp = (ft @ self.bessel.T) * self.space_grid.x_weights[:, None]  # (n_x, n_lambda)
        out = np.empty(self.spectral_grid.shape)
        for idx, lag in self._lambda_chunks():
            out[idx, :] = np.einsum("mki,ik->km", lag, tmp[:, idx])
        out *= self.spectral_grid.band
        return SpectralFunction(grid=self.spectral_grid, values=out)

    def inverse(self, g: SpectralFunction) -> SampledFunction:
        """Synthesis: f(x,t) = integral g(lam,m) phi_(lam,m)(x,t) dgamma_alpha.

        The adjoint of the analysis map; with the unitary normalization this
        inverts ``forward`` up to band truncation and quadrature error.
        """
        if g.grid.shape != self.spectral_grid.shape:
            raise ValueError("spectral function does not live on the plan's spectral grid")
        wg = g.grid.weights_2d() * g.values  # (n_lambda, n_m)
        acc = np.empty((self.spectral_grid.lambda_nodes.size, self.space_grid.x_nodes.size))
        for idx, lag in self._lambda_chunks():
            acc[idx, :] = np.einsum("km,mki->ki", wg[idx, :], lag)
        return SampledFunction(grid=self.space_grid, values=acc.T @ self.bessel)

    def forward_at(self, lams: np.ndarray, ms: np.ndarray, f: SampledFunction) -> np.ndarray:
        """Analysis evaluated at arbitrary spectral points (no band mask).

        Returns an array of shape (len(lams), len(ms)).  Accurate only where
        the plan's space grid resolves the kernel oscillation, i.e. for
        lam * max(ms) within the grid's band limit.
        """
        lams = np.atleast_1d(np.asarray(lams, dtype=float))
        ms = np.atleast_1d(np.asarray(ms, dtype=int))
        ft = f.values * self.space_grid.t_weights[None, :]
        bes = bessel_normalized(self.ctx.nu, np.outer(lams, self.space_grid.t_nodes))
        tmp = (ft @ bes.T) * self.space_grid.x_weights[:, None]
        u = np.outer(lams, self.space_grid.x_nodes ** 2)
        lag = laguerre_function_table(int(ms.max()), self.ctx.alpha, u)
        return np.einsum("mki,ik->km", lag[ms], tmp)

    def synthesize_at(self, g: SpectralFunction, x: np.ndarray, t: np.ndarray) -> np.ndarray:
        """Synthesis evaluated at arbitrary space points (tensor layout)."""
        x = np.atleast_1d(np.asarray(x, dtype=float))
        t = np.atleast_1d(np.asarray(t, dtype=float))
        lam = self.spectral_grid.lambda_nodes
        wg = g.grid.weights_2d() * g.values
        bes = bessel_normalized(self.ctx.nu, np.outer(lam, t))
        u = np.outer(lam, x ** 2)
        lag = laguerre_function_table(self.spectral_grid.m_max, self.ctx.alpha, u)
        acc = np.einsum("km,mki->ki", wg, lag)
        return acc.T @ bes

    # -- kernel inspection ---------------------------------------------------

    def kernel_at(self, lam: float, m: int, x, t):
        from .specfun import eigenfunction
        return eigenfunction(self.ctx, lam, m, x, t)

    def kernel_row(self, k: int, m: int) -> np.ndarray:
        """Dense kernel values phi_(lam_k, m) on the space grid, (n_x, n_t)."""
        lam = self.spectral_grid.lambda_nodes[k]
        bes = bessel_normalized(self.ctx.nu, lam * self.space_grid.t_nodes)
        lag = laguerre_function_table(m, self.ctx.alpha, lam * self.space_grid.x_nodes ** 2)[m]
        return np.outer(lag, bes)

    def kernel_matrix(self) -> np.ndarray:
        """Full dense kernel, one row per (lam, m) pair in C order; O(N*M) memory."""
        nl, nm = self.spectral_grid.shape
        nx, nt = self.space_grid.shape
        out = np.empty((nl * nm, nx * nt))
        for k in range(nl):
            for j, m in enumerate(self.spectral_grid.m_list):
                out[k * nm + j] = self.kernel_row(k, int(m)).ravel()
        return out

    def refined(self, factor: int = 2) -> "TransformPlan":
        """Plan on grids with ``factor`` times the panels and band size.

        The spectral index cap scales with the resolution so the resolvable
        band grows consistently on both axes.
        """
        sg = self.space_grid
        pg = self.spectral_grid
        space = build_space_grid(self.ctx, sg.x_max, sg.t_max,
                                 sg.panels_x * factor, sg.panels_t * factor,
                                 sg.nodes_per_panel)
        spectral = build_spectral_grid(self.ctx, pg.lambda_max, pg.m_max * factor,
                                       pg.panels * factor, pg.nodes_per_panel,
                                       pg.normalization, space_grid=space)
        return TransformPlan(ctx=self.ctx, space_grid=space, spectral_grid=spectral,
                             memory_budget=self.memory_budget)


def plan(ctx: AlphaContext, space_grid: SpaceGrid, spectral_grid: SpectralGrid) -> TransformPlan:
    """Build a transform plan after checking the grids share alpha."""
    return TransformPlan(ctx=ctx, space_grid=space_grid, spectral_grid=spectral_grid)


def default_plan(ctx: AlphaContext, x_max: float = 12.0, t_max: float = 12.0,
                 lambda_max: float = 12.0, m_max: int = 512, panels: int = 8,
                 nodes_per_panel: int = 16, normalization: str = UNITARY) -> TransformPlan:
    """The library's default desk-scale transform configuration."""
    space = build_space_grid(ctx, x_max, t_max, panels, panels, nodes_per_panel)
    spectral = build_spectral_grid(ctx, lambda_max, m_max, panels, nodes_per_panel,
                                   normalization, space_grid=space)
    return TransformPlan(ctx=ctx, space_grid=space, spectral_grid=spectral)


# ---------------------------------------------------------------------------
# verification operations
# ---------------------------------------------------------------------------

def plancherel_defect(p: TransformPlan, f: SampledFunction) -> float:
    """Relative gap | ||f||_2 - ||F f||_2 | / ||f||_2 between the two sides."""
    n_space = lp_norm_space(f, 2)
    if n_space == 0.0:
        raise ValueError("plancherel_defect is undefined for the zero function")
    n_spec = lp_norm_spectral(p.forward(f), 2)
    return abs(n_space - n_spec) / n_space


def convolve_spectral(p: TransformPlan, f: SampledFunction, g: SampledFunction) -> SampledFunction:
    """Convolution through the product theorem: inverse of (F f) * (F g)."""
    Ff = p.forward(f)
    Fg = p.forward(g)
    return p.inverse(SpectralFunction(grid=p.spectral_grid, values=Ff.values * Fg.values))


def translate_alpha0(f, x: float, t: float, y, s, n_theta: int = 64):
    """Generalized translation at alpha = 0.

    T_(x,t) f(y,s) = (1/4 pi) sum_{i,j in {0,1}} int_0^pi
        f(Delta_th(x,y), x y sin th + (-1)^i t + (-1)^j s) d th,
    Delta_th(x,y) = sqrt(x^2 + y^2 + 2 x y cos th).

    ``f`` must be even in its second argument (it is evaluated at negative
    second arguments).  Vectorized over arrays y, s of equal shape.
    """
    ya = np.asarray(y, dtype=float)
    sa = np.asarray(s, dtype=float)
    th, w = gauss_legendre_composite(np.array([0.0, math.pi]), n_theta)
    delta = np.sqrt(x * x + ya[..., None] ** 2 + 2.0 * x * ya[..., None] * np.cos(th))
    base = x * ya[..., None] * np.sin(th)
    acc = np.zeros_like(delta)
    for sig_t in (t, -t):
        for sig_s in (sa[..., None], -sa[..., None]):
            acc += f(delta, base + sig_t + sig_s)
    out = np.tensordot(acc, w, axes=([-1], [0])) / (4.0 * math.pi)
    return float(out) if np.isscalar(y) and np.isscalar(s) else out


def convolve_direct_alpha0(ctx: AlphaContext, f, g, out_x: np.ndarray, out_t: np.ndarray,
                           inner_grid: SpaceGrid, n_theta: int = 64) -> np.ndarray:
    """Direct convolution (f*g)(x,t) = int T_(x,t) f(y,s) g(y,s) dm_0(y,s)
    at alpha = 0, evaluated on the tensor product of out_x and out_t.

    Nested quadrature: the translation's theta integral inside, the (y,s)
    integral on ``inner_grid`` outside.
    """
    if ctx.alpha != 0.0:
        raise ValueError("direct convolution is only defined for alpha = 0")
    Y, S = inner_grid.meshes()
    gv = g(Y, S)
    w2 = inner_grid.weights_2d()
    out = np.empty((out_x.size, out_t.size))
    for i, xv in enumerate(out_x):
        for j, tv in enumerate(out_t):
            tf = translate_alpha0(f, xv, tv, Y, S, n_theta=n_theta)
            out[i, j] = float(np.sum(w2 * tf * gv))
    return out


def young_check(p: TransformPlan, f, g, pexp: float, qexp: float, rexp: float,
                name: str = "young") -> InequalityReport:
    """Young's inequality report ||f*g||_r <= ||f||_p ||g||_q via spectral
    convolution; requires 1/p + 1/q - 1 = 1/r."""
    if abs(1.0 / pexp + 1.0 / qexp - 1.0 - 1.0 / rexp) > 1e-12:
        raise ValueError("young_check requires 1/p + 1/q - 1 = 1/r")
    fs = SampledFunction.from_callable(p.space_grid, f)
    gs = SampledFunction.from_callable(p.space_grid, g)
    conv = convolve_spectral(p, fs, gs)
    lhs = lp_norm_space(conv, rexp)
    rhs = lp_norm_space(fs, pexp) * lp_norm_space(gs, qexp)
    # quadrature sensitivity probe: redo the right side on a finer grid
    fine = build_space_grid(p.ctx, p.space_grid.x_max, p.space_grid.t_max,
                            p.space_grid.panels_x, p.space_grid.panels_t,
                            p.space_grid.nodes_per_panel + 8)
    rhs_fine = (lp_norm_space(SampledFunction.from_callable(fine, f), pexp)
                * lp_norm_space(SampledFunction.from_callable(fine, g), qexp))
    err = abs(rhs_fine - rhs) / rhs if rhs > 0 else 0.0
    return InequalityReport(
        name=name, lhs=lhs, rhs_paper=rhs, rhs_oracle=rhs,
        params={"alpha": p.ctx.alpha, "p": pexp, "q": qexp, "r": rexp,
                "normalization": p.spectral_grid.normalization},
        grid_error_estimate=err,
        grid={"space": p.space_grid.meta(), "spectral": p.spectral_grid.meta()},
    )


def spectral_restriction_norm(p: TransformPlan, f: SampledFunction, E: SpectralSet,
                              panels: int = 4, nodes_per_panel: int = 16,
                              normalization: str = UNITARY) -> float:
    """|| (F f) chi_E ||_{gamma,2} on a dedicated quadrature grid over E.

    E gets its own Gauss-Legendre rule on [lambda_lo, lambda_hi] so the
    restriction never cuts through a quadrature panel of the plan's grid.
    """
    ctx = p.ctx
    a = ctx.alpha
    edges = np.linspace(E.lambda_lo, E.lambda_hi, panels + 1)
    lam, wl = gauss_legendre_composite(edges, nodes_per_panel)
    const = ctx.spectral_prefactor_literal
    if normalization == UNITARY:
        const *= ctx.unitarity_factor
    from .specfun import laguerre_at_zero_sequence
    zeros = laguerre_at_zero_sequence(max(E.m_set), a)
    ms = np.array(E.m_set, dtype=int)
    F = p.forward_at(lam, ms, f)  # (n_lam, n_m)
    w = np.outer(wl * lam ** (3 * a + 1) * const, zeros[ms])
    return float(math.sqrt(np.sum(w * F ** 2)))

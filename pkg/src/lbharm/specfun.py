"""Special functions: normalized Bessel, Laguerre polynomials/functions,
and the joint eigenfunctions of the two radial operators.

Evaluation strategies
---------------------
* normalized Bessel j_nu: power series on the small-argument range (term
  count from a 1e-16 tail bound), relation
  j_nu(x) = Gamma(nu+1) (2/x)^nu J_nu(x) with scipy's J_nu beyond.  The
  series alone loses digits for large argument.
* Laguerre values use the stable three-term recurrence; the alternating
  explicit sum cancels catastrophically for large m*x and is kept only as
  an exact-arithmetic test oracle.
* The normalized Laguerre function folds the division by L_m(0) into the
  recurrence start values so nothing overflows at large m + alpha.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.special import gamma as _gamma, gammaln as _gammaln, jv as _jv

from .context import AlphaContext

# series cancellation grows like eps * cosh(x); 10 keeps the absolute error
# near 1e-13 while scipy's J_nu covers the rest
_SERIES_CUTOFF = 10.0
_SERIES_MAX_TERMS = 200


def gamma_fn(x):
    """Gamma function for positive arguments.

    Raises ValueError on nonpositive input (the rest of the library never
    needs the analytic continuation).
    """
    xa = np.asarray(x, dtype=float)
    if np.any(xa <= 0):
        raise ValueError("gamma_fn requires positive arguments")
    out = _gamma(xa)
    return float(out) if np.isscalar(x) or xa.ndim == 0 else out


def beta_fn(a, b):
    """Euler beta function B(a, b) = Gamma(a) Gamma(b) / Gamma(a + b), a, b > 0."""
    if a <= 0 or b <= 0:
        raise ValueError("beta_fn requires positive arguments")
    return math.exp(_gammaln(a) + _gammaln(b) - _gammaln(a + b))


def bessel_normalized(nu: float, x):
    """Normalized Bessel function j_nu with j_nu(0) = 1.

    j_nu(x) = Gamma(nu+1) * sum_k (-1)^k (x/2)^(2k) / (k! Gamma(nu+k+1)),
    an even entire function of x.  Supported for nu >= -1/2.
    """
    if nu < -0.5:
        raise ValueError(f"bessel_normalized requires nu >= -1/2, got {nu}")
    xa = np.abs(np.asarray(x, dtype=float))
    out = np.empty_like(xa)
    small = xa <= _SERIES_CUTOFF
    if np.any(small):
        out[small] = _bessel_series(nu, xa[small])
    if np.any(~small):
        xl = xa[~small]
        out[~small] = _gamma(nu + 1.0) * (2.0 / xl) ** nu * _jv(nu, xl)
    if np.any(~np.isfinite(out)):
        raise OverflowError("bessel_normalized overflowed its evaluation range")
    return float(out) if np.isscalar(x) or np.asarray(x).ndim == 0 else out


def _bessel_series(nu: float, x: np.ndarray) -> np.ndarray:
    q = -0.25 * x * x
    term = np.ones_like(x)
    acc = np.ones_like(x)
    for k in range(1, _SERIES_MAX_TERMS):
        term = term * q / (k * (nu + k))
        acc += term
        if np.all(np.abs(term) <= 1e-17 * np.maximum(np.abs(acc), 1.0)):
            break
    return acc


def laguerre_poly(m: int, alpha: float, x):
    """Laguerre polynomial L_m^alpha(x) via the three-term recurrence

    (m+1) L_{m+1} = (2m + alpha + 1 - x) L_m - (m + alpha) L_{m-1}.
    """
    if m < 0:
        raise ValueError("laguerre_poly requires m >= 0")
    xa = np.asarray(x, dtype=float)
    prev = np.ones_like(xa)
    if m == 0:
        out = prev
    else:
        cur = alpha + 1.0 - xa
        for k in range(1, m):
            prev, cur = cur, ((2 * k + alpha + 1.0 - xa) * cur - (k + alpha) * prev) / (k + 1.0)
        out = cur
    return float(out) if np.isscalar(x) or xa.ndim == 0 else out


def laguerre_at_zero(m: int, alpha: float) -> float:
    """L_m^alpha(0) = Gamma(m + alpha + 1) / (Gamma(m + 1) Gamma(alpha + 1)) > 0."""
    if m < 0:
        raise ValueError("laguerre_at_zero requires m >= 0")
    return math.exp(_gammaln(m + alpha + 1.0) - _gammaln(m + 1.0) - _gammaln(alpha + 1.0))


def laguerre_at_zero_sequence(m_max: int, alpha: float) -> np.ndarray:
    """Array of L_m^alpha(0), m = 0..m_max, built by the ratio recurrence."""
    out = np.ones(m_max + 1)
    for m in range(1, m_max + 1):
        out[m] = out[m - 1] * (m + alpha) / m
    return out


def laguerre_function(m: int, alpha: float, x):
    """Normalized Laguerre function e^{-x/2} L_m^alpha(x) / L_m^alpha(0).

    Bounded by 1 in absolute value on [0, inf); equals 1 at x = 0.
    """
    xa = np.asarray(x, dtype=float)
    if np.any(xa < 0):
        raise ValueError("laguerre_function requires x >= 0")
    out = laguerre_function_table(m, alpha, xa)[m]
    return float(out) if np.isscalar(x) or xa.ndim == 0 else out


def laguerre_function_table(m_max: int, alpha: float, x: np.ndarray) -> np.ndarray:
    """All normalized Laguerre functions m = 0..m_max at once.

    Returns an array of shape (m_max+1, *x.shape).  The recurrence for the
    normalized values,

        (m + alpha + 1) R_{m+1} = (2m + alpha + 1 - x) R_m - m R_{m-1},

    keeps every entry in [-1, 1], so there is no overflow at any order.
    """
    if m_max < 0:
        raise ValueError("laguerre_function_table requires m_max >= 0")
    x = np.asarray(x, dtype=float)
    out = np.empty((m_max + 1,) + x.shape)
    damp = np.exp(-x / 2.0)
    out[0] = damp
    if m_max >= 1:
        out[1] = damp * (1.0 - x / (alpha + 1.0))
    for m in range(1, m_max):
        out[m + 1] = ((2 * m + alpha + 1.0 - x) * out[m] - m * out[m - 1]) / (m + alpha + 1.0)
    return out


def generating_function_check(alpha: float, t: float, x: float, m_max: int):
    """Partial sum of sum_m t^m L_m^alpha(x) against the closed form
    (1-t)^(-alpha-1) exp(-x t / (1-t)).

    Returns (partial_sum, closed_form); the caller asserts convergence.
    """
    if abs(t) >= 1.0:
        raise ValueError("generating_function_check requires |t| < 1")
    prev = 1.0
    acc = prev  # m = 0 term
    if m_max >= 1:
        cur = alpha + 1.0 - x
        tpow = t
        acc += tpow * cur
        for k in range(1, m_max):
            prev, cur = cur, ((2 * k + alpha + 1.0 - x) * cur - (k + alpha) * prev) / (k + 1.0)
            tpow *= t
            acc += tpow * cur
    closed = (1.0 - t) ** (-alpha - 1.0) * math.exp(-x * t / (1.0 - t))
    return acc, closed


def eigenfunction(ctx: AlphaContext, lam: float, m: int, x, t):
    """Joint eigenfunction phi_(lam,m)(x,t) = j_{alpha-1/2}(lam t) * Lag_m^alpha(lam x^2).

    Satisfies |phi| <= 1 and phi(0,0) = 1, and solves
        D1 phi = -lam^2 phi,     D2 phi = -2 lam (2m + alpha + 1) phi,
    with D1 = d^2/dt^2 + (2 alpha / t) d/dt and
    D2 = d^2/dx^2 + ((2 alpha + 1)/x) d/dx + x^2 D1.
    """
    xa = np.asarray(x, dtype=float)
    ta = np.asarray(t, dtype=float)
    bes = bessel_normalized(ctx.nu, lam * ta)
    lag = laguerre_function(m, ctx.alpha, lam * xa * xa)
    out = np.asarray(bes) * np.asarray(lag)
    if np.isscalar(x) and np.isscalar(t):
        return float(out)
    return out


def pde_residuals(ctx: AlphaContext, lam: float, m: int, x: float, t: float,
                  h: float = 1e-4):
    """Central finite-difference residuals of the defining PDE system at (x, t).

    Returns (r1, r2) where r1 = D1 phi + lam^2 phi and
    r2 = D2 phi + 2 lam (2m + alpha + 1) phi.  Points too close to the
    coordinate axes amplify step error through the 1/x, 1/t coefficients;
    keep x, t >= 0.2.
    """
    a = ctx.alpha

    def phi(xx, tt):
        return eigenfunction(ctx, lam, m, xx, tt)

    p0 = phi(x, t)
    ptp, ptm = phi(x, t + h), phi(x, t - h)
    pxp, pxm = phi(x + h, t), phi(x - h, t)
    d2t = (ptp - 2.0 * p0 + ptm) / (h * h)
    d1t = (ptp - ptm) / (2.0 * h)
    d2x = (pxp - 2.0 * p0 + pxm) / (h * h)
    d1x = (pxp - pxm) / (2.0 * h)
    d1 = d2t + (2.0 * a / t) * d1t
    d2 = d2x + ((2.0 * a + 1.0) / x) * d1x + x * x * d1
    r1 = d1 + lam * lam * p0
    r2 = d2 + 2.0 * lam * (2 * m + a + 1.0) * p0
    return r1, r2

"""Deformation-parameter context shared by every operation.

All measures, kernels and constants of the library depend on a single
nonnegative parameter ``alpha``.  ``AlphaContext`` freezes alpha together
with the gamma-function values that appear in the measure densities, so
they are computed once and threaded through the whole pipeline.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from scipy.special import gamma as _gamma


@dataclass(frozen=True)
class AlphaContext:
    """Immutable bundle of alpha and its derived constants.

    Attributes
    ----------
    alpha : float
        Deformation parameter, must be >= 0.
    gamma_alpha_plus_1 : float
        Gamma(alpha + 1).
    gamma_alpha_plus_half : float
        Gamma(alpha + 1/2).
    """

    alpha: float
    gamma_alpha_plus_1: float = field(default=0.0)
    gamma_alpha_plus_half: float = field(default=0.0)

    def __post_init__(self):
        if self.alpha < 0:
            raise ValueError(f"alpha must be nonnegative, got {self.alpha}")
        if self.gamma_alpha_plus_1 == 0.0:
            object.__setattr__(self, "gamma_alpha_plus_1", float(_gamma(self.alpha + 1.0)))
        if self.gamma_alpha_plus_half == 0.0:
            object.__setattr__(self, "gamma_alpha_plus_half", float(_gamma(self.alpha + 0.5)))

    @property
    def space_density_const(self) -> float:
        """Constant 1/(pi Gamma(alpha+1)) of the space measure density."""
        return 1.0 / (math.pi * self.gamma_alpha_plus_1)

    @property
    def spectral_prefactor_literal(self) -> float:
        """Literal spectral-measure constant 1/(2^(2 alpha - 1) Gamma(alpha + 1/2))."""
        return 1.0 / (2.0 ** (2.0 * self.alpha - 1.0) * self.gamma_alpha_plus_half)

    @property
    def unitarity_factor(self) -> float:
        """Factor 2 pi / Gamma(alpha + 1/2) that rescales the literal spectral
        measure into the one making the transform an L^2 isometry.

        Derived analytically from the Laguerre completeness relation and the
        Hankel Plancherel theorem, and confirmed numerically by the
        Plancherel-defect tests (see tests/test_transform.py).
        """
        return 2.0 * math.pi / self.gamma_alpha_plus_half

    @property
    def homogeneous_dim(self) -> float:
        """Homogeneous dimension 6 alpha + 4 of the dilation structure."""
        return 6.0 * self.alpha + 4.0

    @property
    def nu(self) -> float:
        """Order alpha - 1/2 of the normalized Bessel factor of the kernel."""
        return self.alpha - 0.5


def make_context(alpha: float) -> AlphaContext:
    """Build an :class:`AlphaContext` for the given alpha."""
    return AlphaContext(alpha=float(alpha))

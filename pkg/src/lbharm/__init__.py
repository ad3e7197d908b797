"""lbharm: Laguerre-Bessel harmonic analysis and uncertainty-inequality
verification at desk scale.

The package evaluates the special functions and weighted measures of the
Laguerre-Bessel setting, implements the transform and its heat semigroup
spectrally, and verifies every closed-form constant and inequality of the
associated uncertainty theory by independent quadrature.
"""

from .context import AlphaContext, make_context
from .measure import (
    LITERAL,
    UNITARY,
    SampledFunction,
    SpaceGrid,
    SpectralFunction,
    SpectralGrid,
    SpectralSet,
    ball_moment,
    build_graded_space_grid,
    build_space_grid,
    build_spectral_grid,
    dilate,
    dilate_normalized,
    gamma_measure_of_set,
    homogeneous_norm,
    integrate_space,
    integrate_spectral,
    lp_norm_space,
    lp_norm_spectral,
)
from .report import InequalityReport, reports_to_csv, reports_to_json
from .specfun import (
    bessel_normalized,
    beta_fn,
    eigenfunction,
    gamma_fn,
    generating_function_check,
    laguerre_at_zero,
    laguerre_function,
    laguerre_poly,
)
from .transform import (
    TransformPlan,
    convolve_direct_alpha0,
    convolve_spectral,
    default_plan,
    plan,
    plancherel_defect,
    translate_alpha0,
    young_check,
)
from .heat import (
    apply_L_power,
    eigenvalue_L,
    heat_apply,
    heat_box_mass,
    heat_kernel,
    heat_kernel_mass,
    heat_kernel_profile,
    heat_l2_norm_sq,
    heat_multiplier,
    heat_smoothing_ratio,
)
from .uncertainty import (
    ORACLE,
    PAPER,
    beta_block,
    beta_block_oracle,
    bound_profile,
    bound_profile_argmin,
    constant_C_critical,
    constant_K,
    constant_M,
    constant_N,
    heisenberg_ratio,
    interpolation_check,
    lemma_l1_l2_ratio,
    local_critical,
    local_large_s,
    local_small_s,
)
from . import testfamily

__version__ = "0.1.0"

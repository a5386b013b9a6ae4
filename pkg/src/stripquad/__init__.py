"""Quadrature over the real line for analytic integrands with
single- or double-exponential decay: rule construction, worst-case-error
lower and upper bounds in log scale, and rate-fitting sweeps.
"""

from .bounds import (
    BoundKind,
    BoundReport,
    bound_report_to_json,
    fooling_log_integrand,
    lower_bound_cor41,
    lower_bound_cor42,
    lower_bound_cor43,
    lower_bound_prop22,
    lower_bound_thm31,
    lower_bound_thm32,
    universal_lower_sugihara,
    upper_bound_bernstein_rate,
    upper_bound_tail,
    upper_bound_trap_rate,
)
from .errors import (
    BracketViolation,
    DegenerateAbscissa,
    InsufficientData,
    InvalidInterval,
    InvalidParameter,
    NonexistentWeight,
    Overflow,
    PanelLimitExceeded,
    PreconditionNotMet,
    StripQuadError,
)
from .harness import (
    FitResult,
    RateModel,
    SweepConfig,
    SweepRecord,
    TestIntegrand,
    catalog,
    emit_csv,
    empirical_error,
    fit_rate,
    fit_to_json,
    parse_csv,
    select_exponent,
    sweep,
)
from .kernels import backend as kernel_backend
from .numerics import (
    IntegrationResult,
    LogProduct,
    ThreeTermRecurrence,
    integrate_reference,
    log_sum_exp,
    poly_roots_by_newton,
)
from .rules import (
    QuadratureRule,
    RuleKind,
    RuleMeta,
    emit_rule_csv,
    gauss_hermite_rule,
    min_separation,
    scaled_clenshaw_curtis,
    scaled_gauss_legendre,
    scaling_factor,
    trapezoidal_rule,
)
from .weights import (
    DEWeight,
    SEWeight,
    StripDomain,
    WeightSpec,
    integration_cutoff,
    log_weight,
    parse_weight,
    tail_mass_upper,
    validate,
    weight_tag,
)

__version__ = "0.1.0"

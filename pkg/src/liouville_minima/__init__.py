"""Liouville-type numbers from divisibility chains and the successive-minima
geometry of their simultaneous rational approximations."""

from .errors import AmbiguousRoundingError, ResourceBudgetError, ValidationError
from .logscale import Interval, QScale, log_interval
from .minima import (
    ApproxTarget,
    LatticePoint,
    MinimaResult,
    PsiExtremes,
    Trajectory,
    build_q_grid,
    point_exponent,
    point_exponent_interval,
    psi_trajectory,
    psi_upper_bounds_from_witnesses,
    successive_minima_enumerate,
    truncation_candidates,
    unit_candidates,
    write_trajectory_csv,
    write_witness_dump,
)
from .transfer import (
    CheckReport,
    ConvergentRecord,
    IrrationalityEstimate,
    RuleResult,
    SpectrumBounds,
    SpectrumEstimates,
    bounds_table,
    check_inequality_suite,
    continued_fraction_convergents,
    golden_ratio_control,
    irrationality_estimate,
    irrationality_exponent,
    lambda_from_psi,
    linear_form_constants,
    psi_from_lambda,
    psi_level_suite,
    spectrum_from_extremes,
    with_lower_bounds,
)
from .qchain import (
    GrowthWitness,
    PowerVector,
    QSequenceSpec,
    RationalTruncation,
    check_growth,
    powers,
    q_terms,
    spec_from_text,
    spec_to_text,
    truncate,
)
from .witnesses import (
    Certificate,
    LowerBoundReport,
    RoundingReport,
    WitnessFamily,
    admissible_indices,
    build_family,
    certificate_text,
    certify,
    det_certificate,
    error_and_exponents,
    lambda_lower_bounds,
    verify_round,
)
from .figures import render_trajectory_figure
from .report import RunConfig, RunResult, presets, run

__version__ = "0.1.0"

__all__ = [
    "CheckReport",
    "ConvergentRecord",
    "IrrationalityEstimate",
    "RuleResult",
    "SpectrumBounds",
    "SpectrumEstimates",
    "bounds_table",
    "check_inequality_suite",
    "continued_fraction_convergents",
    "golden_ratio_control",
    "irrationality_estimate",
    "irrationality_exponent",
    "lambda_from_psi",
    "linear_form_constants",
    "psi_from_lambda",
    "psi_level_suite",
    "spectrum_from_extremes",
    "with_lower_bounds",
    "AmbiguousRoundingError",
    "ResourceBudgetError",
    "ValidationError",
    "Interval",
    "QScale",
    "log_interval",
    "ApproxTarget",
    "LatticePoint",
    "MinimaResult",
    "PsiExtremes",
    "Trajectory",
    "build_q_grid",
    "point_exponent",
    "point_exponent_interval",
    "psi_trajectory",
    "psi_upper_bounds_from_witnesses",
    "successive_minima_enumerate",
    "truncation_candidates",
    "unit_candidates",
    "write_trajectory_csv",
    "write_witness_dump",
    "GrowthWitness",
    "PowerVector",
    "QSequenceSpec",
    "RationalTruncation",
    "check_growth",
    "powers",
    "q_terms",
    "spec_from_text",
    "spec_to_text",
    "truncate",
    "Certificate",
    "LowerBoundReport",
    "RoundingReport",
    "WitnessFamily",
    "admissible_indices",
    "build_family",
    "certificate_text",
    "certify",
    "det_certificate",
    "error_and_exponents",
    "lambda_lower_bounds",
    "verify_round",
    "render_trajectory_figure",
    "RunConfig",
    "RunResult",
    "presets",
    "run",
    "__version__",
]

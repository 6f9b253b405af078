"""Spectral computations for the Neumann fractional Laplacian and the scaled Rayleigh quotient."""

__version__ = "0.1.0"

from .analysis import (
    BigEEstimate,
    BubbleParams,
    CubeGap,
    PhaseCell,
    ResolutionError,
    bubble_ladder,
    bubble_quotient,
    constant_value_at_critical,
    cube_gap_check,
    epsilon_threshold,
    estimate_big_E,
    phase_sweep,
    reduced_sharp_constant,
    sobolev_sharp_constant,
    staircase_violations,
)
from .field_transforms import abs_project, analyze, lq_norm, mean_free_fraction, synthesize
from .fractional_form import eigen_powers, hs_norm_sq, quadratic_form
from .functionals import (
    DomainError,
    ProblemParams,
    auxiliary_J,
    critical_exponent,
    d2J_at_one,
    d2J_general,
    d3J_at_one_phi1,
    grad_rayleigh,
    rayleigh_I,
)
from .inequality import IneqReport, chain_holds, gamma_fn, log_gamma, verify_chain
from .minimize import (
    LocalVerdict,
    MinimizeResult,
    SolverOptions,
    brute_force_oracle,
    local_min_test_at_one,
    minimize_quotient,
)
from .spectral_domain import (
    ConfigurationError,
    DomainKind,
    DomainSpec,
    SpectralData,
    SpectralDataError,
    build_box_basis,
    load_sample,
    load_spectral_data,
    save_spectral_data,
    triangle_ritz_basis,
    validate_spectral_data,
)

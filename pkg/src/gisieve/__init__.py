"""Desk-scale large sieve experiments over the Gaussian integers Z[i]."""

from .core import (
    GaussianInt,
    IMAG,
    ONE,
    ZERO,
    ResidueSystem,
    div_rem,
    divisors,
    gcd,
    residue_system,
    totient,
)
from .characters import (
    additive_char,
    additive_char_phase,
    character_table,
    gauss_sum,
    is_proper,
    orthogonality_sum,
    unit_group_structure,
)
from .sieve import (
    ALL,
    CUSTOM,
    NATURAL,
    SQUARE_NORM,
    CoefficientSequence,
    ModuliFamily,
    bound_t1,
    bound_t2,
    bound_t3,
    bound_t4,
    inner_sum,
    multiplicative_lhs,
    sieve_lhs,
    sieve_lhs_fast,
)
from .spacing import (
    DiskCountQuery,
    SpacingInstance,
    disk_point_count,
    f_point,
    f_point_in_disk,
    frac_f,
    kl_pair,
    residue_shift,
    rotation_matrix,
    spacing_distance_sq,
    switch_lattice_check,
    verify_spacing_lemma,
)
from .fourier import (
    EXP_LINEAR,
    EXP_SQRT,
    CongruenceCountInstance,
    Weight,
    congruence_count,
    congruence_count_bound,
    congruence_count_bound_ok,
    gaussian_shift_sum,
    indicator_domination_check,
    poisson_2d_pair,
    theta_identity_check,
    weighted_lattice_sum,
)
from .squarenorm import coverage_diff, enumerate_pyth_param, enumerate_square_norm
from .double_sieve import BilinearInstance, bilinear_form, check_dls, proximity_form
from .harness import ExperimentConfig, SieveRecord, run_sieve_grid, slope_report

__version__ = "0.1.0"

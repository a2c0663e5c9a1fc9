"""kgbounds: spectra and relative eigenvalue perturbation bounds for
block Hamiltonians H = JG built from matrix data (U^2, V)."""

from .bounds import (
    BlockStructure,
    GapInclusion,
    KappaBundle,
    KappaCheck,
    PerturbationSpec,
    VerificationReport,
    analyze_perturbation,
    block_structure_analysis,
    delta_gram,
    eigenvalue_interval_bounds,
    exact_kappa_pm,
    gap_bound,
    gap_inclusion,
    improved_inclusion,
    interval_is_empty,
    kappa_disjoint,
    kappa_general,
    kappa_relative,
    kappa_signed_pair,
    kappa_sum,
    norm_bound_interval,
    perturbation_constants,
    rescale_kappa,
    t_norm_bound,
    verify_bounds,
)
from .core import (
    KleinGordonSystem,
    ModelSpec,
    apply_j,
    assemble_free,
    assemble_system,
    contraction_bound,
    j_matrix,
    operator_a,
    optimize_shift,
    spectral_norm,
    sqrt_spd,
    symmetrize,
)
from .exceptions import (
    AlphaOutOfRange,
    ContractionNotLessThanOne,
    DimensionMismatch,
    EmptySpectrum,
    KappaMinusNotAboveMinusOne,
    KappaOutOfRange,
    KGError,
    NonRealSpectrum,
    NotPositiveDefinite,
    ParseError,
    ValidationError,
    ZeroInSpectrum,
)
from .harness import (
    Example1Result,
    Example2Result,
    SweepResult,
    example1_table,
    example2_tables,
    render_example1_report,
    render_example2_report,
    sweep_potential,
)
from .models import (
    HarmonicParams,
    SquareWellParams,
    exact_harmonic_eigs,
    harmonic_model,
    harmonic_sensitivity,
    load_model,
    random_perturbation,
    save_model,
    square_well_model,
    square_well_perturbation,
)
from .spectral import (
    DefectWitness,
    SignOperator,
    SpectrumReport,
    central_gap,
    defect_check,
    eigen_spectrum,
    pencil_residual,
    relative_distance,
    sign_operator,
    similarity_eigensolve,
)

__version__ = "0.1.0"

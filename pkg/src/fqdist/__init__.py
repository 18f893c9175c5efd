"""Distance sets, sphere spectra, and incidence counts over prime fields.

The package computes exact character sum identities, measures Fourier
decay of spheres defined by power norms, and checks spectral pair count
formulas against brute force, with a CLI (``fqdist``) that sweeps
parameter grids and writes CSV, JSON lines, and figure reports.
"""

from .errors import (
    AmbientMismatch,
    CompositeModulus,
    DimensionMismatch,
    DimensionTooLarge,
    EmptySet,
    FqdistError,
    HypothesisViolated,
    InvalidConfig,
    OrderDoesNotDivide,
    SizeTooLarge,
    TrivialCharacter,
    ZeroCoefficient,
    ZeroFrequency,
    ZeroRadius,
)
from .field import (
    CharacterTable,
    FieldElement,
    PrimeField,
    char_fourier,
    gauss_sum,
    is_prime,
    make_field,
    mult_character,
    nth_power_roots,
)
from .vectorspace import (
    FORWARD_NORMALIZATION,
    PointSet,
    SpectralFunction,
    Vector,
    fourier_transform,
    inverse_transform,
    load_point_set,
    norm_n,
    plancherel_residual,
    sample_point_set,
    save_point_set,
)
from .spheres import (
    DECAY_CSV_COLUMNS,
    DecayReport,
    SphereSpec,
    constant_sweep,
    decay_hypothesis_ok,
    decay_report,
    sphere_points,
    sphere_spectrum,
)
from .identities import (
    BoundCheck,
    IdentityCheck,
    check_cohomology_bound,
    check_completed_kloosterman_form,
    check_cubic_power_expansion,
    check_duke_iwaniec,
    check_gauss_expansion,
    compute_A_r,
    identity_tolerance,
)
from .distance import (
    COVERAGE_CSV_COLUMNS,
    CoverageResult,
    IncidenceAudit,
    PairCountResult,
    attainable_radii,
    coverage_experiment,
    coverage_set_size,
    coverage_single_trial,
    coverage_summary,
    distance_set,
    incidence_audit,
    norm_surjective,
    pair_count,
    pair_count_all_radii,
    two_set_coverage,
)
from .harness import ExperimentReport, SuiteConfig, run_suite

__version__ = "0.1.0"

__all__ = [
    "AmbientMismatch", "BoundCheck", "COVERAGE_CSV_COLUMNS",
    "CharacterTable", "CompositeModulus", "CoverageResult",
    "DECAY_CSV_COLUMNS", "DecayReport", "DimensionMismatch",
    "DimensionTooLarge", "EmptySet", "ExperimentReport", "FORWARD_NORMALIZATION",
    "FieldElement", "FqdistError", "HypothesisViolated", "IdentityCheck",
    "IncidenceAudit", "InvalidConfig", "OrderDoesNotDivide",
    "PairCountResult", "PointSet", "PrimeField", "SizeTooLarge",
    "SpectralFunction", "SphereSpec", "SuiteConfig", "TrivialCharacter",
    "Vector", "ZeroCoefficient", "ZeroFrequency", "ZeroRadius",
    "attainable_radii", "char_fourier", "check_cohomology_bound",
    "check_completed_kloosterman_form", "check_cubic_power_expansion",
    "check_duke_iwaniec", "check_gauss_expansion", "compute_A_r",
    "constant_sweep", "coverage_experiment", "coverage_set_size",
    "coverage_single_trial", "coverage_summary", "decay_hypothesis_ok",
    "decay_report", "distance_set", "fourier_transform", "gauss_sum",
    "identity_tolerance", "incidence_audit", "inverse_transform", "is_prime",
    "load_point_set", "make_field", "mult_character", "norm_n",
    "norm_surjective", "nth_power_roots", "pair_count", "pair_count_all_radii",
    "plancherel_residual", "run_suite", "sample_point_set", "save_point_set",
    "sphere_points", "sphere_spectrum", "two_set_coverage",
]

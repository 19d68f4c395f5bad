"""Phase distributions of truncated single-mode fields, computed two ways.

The package builds states on a finite Fock ladder, evaluates the radially
integrated quasiprobability phase distribution either by quadrature over a
polar kernel or through an explicit operator matrix, and compares both with
the finite-basis phase formalism.  A small CLI writes the results as
versioned CSV tables.
"""

from .analysis import (
    MismatchResult,
    NegativityReport,
    angle_moment_mismatch,
    angle_operator,
    fourier_poly_integral,
    moment_matrix,
    negativity_report,
    weak_equivalence_scan,
)
from .checks import CheckResult, run_checks
from .errors import (
    CancellationOverflowError,
    CutoffMismatchError,
    CutoffTooSmallError,
    DegenerateSuperpositionError,
    KernelInconsistencyError,
    OperatorPathUnavailableError,
    PhasekitError,
    QuadratureConstructionError,
    StateSpecError,
)
from .fock import (
    DEFAULT_EPS_TAIL,
    DensityMatrix,
    LadderSet,
    OperatorMatrix,
    StateVector,
    build_state,
    coherent_minimal_cutoff,
    density_from_pure,
    expectation,
    ladder_matrices,
    load_density_file,
    load_operator_file,
    load_state_file,
    make_coherent_state,
    make_number_state,
    parse_complex,
    phase_conjugate,
    phase_shift_state,
    required_cutoff,
    save_operator_file,
    save_state_file,
    superpose,
)
from .pegg_barnett import (
    MomentResult,
    PBBasis,
    moment_integral,
    pair_pb_closed_form,
    pb_basis,
    pb_density,
    pb_density_mixed,
    pb_projector,
    phi_matrix,
    phi_moment,
)
from .phase_operator import (
    OPERATOR_PATH_MAX_CUTOFF,
    pair_coefficient,
    pair_state_closed_form,
    phase_distribution_operator,
    phase_operator_at,
    phase_operator_zero,
)
from .wigner import (
    DISTRIBUTION_KINDS,
    PhaseDistribution,
    PhaseGrid,
    RadialQuadrature,
    build_radial_rule,
    gauss_radial_moment,
    kernel_matrix,
    phase_distribution_radial,
    wigner_eval,
)

__version__ = "0.1.0"

__all__ = [
    "CancellationOverflowError",
    "CheckResult",
    "CutoffMismatchError",
    "CutoffTooSmallError",
    "DEFAULT_EPS_TAIL",
    "DISTRIBUTION_KINDS",
    "DegenerateSuperpositionError",
    "DensityMatrix",
    "KernelInconsistencyError",
    "LadderSet",
    "MismatchResult",
    "MomentResult",
    "NegativityReport",
    "OPERATOR_PATH_MAX_CUTOFF",
    "OperatorMatrix",
    "OperatorPathUnavailableError",
    "PBBasis",
    "PhaseDistribution",
    "PhaseGrid",
    "PhasekitError",
    "QuadratureConstructionError",
    "RadialQuadrature",
    "StateSpecError",
    "StateVector",
    "angle_moment_mismatch",
    "angle_operator",
    "build_radial_rule",
    "build_state",
    "coherent_minimal_cutoff",
    "density_from_pure",
    "expectation",
    "fourier_poly_integral",
    "gauss_radial_moment",
    "kernel_matrix",
    "ladder_matrices",
    "load_density_file",
    "load_operator_file",
    "load_state_file",
    "make_coherent_state",
    "make_number_state",
    "moment_integral",
    "moment_matrix",
    "negativity_report",
    "pair_coefficient",
    "pair_pb_closed_form",
    "pair_state_closed_form",
    "parse_complex",
    "pb_basis",
    "pb_density",
    "pb_density_mixed",
    "pb_projector",
    "phase_conjugate",
    "phase_distribution_operator",
    "phase_distribution_radial",
    "phase_operator_at",
    "phase_operator_zero",
    "phase_shift_state",
    "phi_matrix",
    "phi_moment",
    "required_cutoff",
    "run_checks",
    "save_operator_file",
    "save_state_file",
    "superpose",
    "weak_equivalence_scan",
    "wigner_eval",
]

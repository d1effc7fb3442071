"""Unique ergodicity, Markov measures and transfer-operator eigenproblems
on Bratteli diagram path spaces."""

from .cocycle import (
    CylinderFunction,
    WeightedSystem,
    cocycle_value,
    expectation,
    expectation_sequence,
    local_potential,
    markovianize,
    normalized_potential,
    scaled_path_sums,
    transition_matrices,
)
from .contraction import (
    contraction_epsilon,
    contraction_epsilon_bruteforce,
    markovianize_matrix,
    ratio_bound,
    variation,
)
from .diagram import (
    BratteliDiagram,
    FinitePath,
    TelescopedDiagram,
    Violation,
    count_paths,
    enumerate_paths,
    full_shift_diagram,
    pascal_diagram,
    stationary_diagram,
    telescope,
    validate,
)
from .ergodicity import (
    ErgodicityStatus,
    ErgodicityVerdict,
    check_series_condition,
    check_variation_condition,
    level_entry_ratios,
    variation_decay,
)
from .errors import (
    BratteliError,
    CapacityError,
    InvalidArgumentError,
    UnsupportedInputError,
)
from .measures import (
    MarkovMeasure,
    StateSequence,
    cylinder_mass,
    edge_probabilities,
    exact_state,
    g_measure_residual,
    integrate,
    level_masses,
    solve_state,
    state_equation_residual,
)
from .scaling import ScaledVector
from .sft import (
    RuelleEigenResult,
    RuelleMatrix,
    SftGraph,
    SftSystem,
    WaltersCertificate,
    admissible_words,
    build_ruelle_matrix,
    eigen_measure,
    extend_cylinder_measure,
    stationary_expectation,
    walters_check_locally_constant,
)
from .spectral import PerronResult, perron, primitivity_exponent, wielandt_bound

__version__ = "0.1.0"

__all__ = [
    "BratteliDiagram",
    "BratteliError",
    "CapacityError",
    "CylinderFunction",
    "ErgodicityStatus",
    "ErgodicityVerdict",
    "FinitePath",
    "InvalidArgumentError",
    "MarkovMeasure",
    "PerronResult",
    "RuelleEigenResult",
    "RuelleMatrix",
    "ScaledVector",
    "SftGraph",
    "SftSystem",
    "StateSequence",
    "TelescopedDiagram",
    "UnsupportedInputError",
    "Violation",
    "WaltersCertificate",
    "WeightedSystem",
    "admissible_words",
    "build_ruelle_matrix",
    "check_series_condition",
    "check_variation_condition",
    "cocycle_value",
    "contraction_epsilon",
    "contraction_epsilon_bruteforce",
    "count_paths",
    "cylinder_mass",
    "edge_probabilities",
    "eigen_measure",
    "enumerate_paths",
    "exact_state",
    "expectation",
    "expectation_sequence",
    "extend_cylinder_measure",
    "full_shift_diagram",
    "g_measure_residual",
    "integrate",
    "level_entry_ratios",
    "level_masses",
    "local_potential",
    "markovianize",
    "markovianize_matrix",
    "normalized_potential",
    "pascal_diagram",
    "perron",
    "primitivity_exponent",
    "ratio_bound",
    "scaled_path_sums",
    "solve_state",
    "state_equation_residual",
    "stationary_diagram",
    "stationary_expectation",
    "telescope",
    "transition_matrices",
    "validate",
    "variation",
    "variation_decay",
    "walters_check_locally_constant",
    "wielandt_bound",
]

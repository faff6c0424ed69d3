"""Outcome-conditioned expectation values under symmetry constraints.

A small numerical laboratory for finite-dimensional quantum measurement
models: outcome probabilities, conditional expectation values before and
after measurement, symmetry-induced decoherence maps, verifiers for the
coherence-irrelevance theorems, and an excitation-exchange
(Jaynes-Cummings) model family to exercise them on.
"""

from .engine import (
    P_FLOOR,
    ConditionalReport,
    ZeroProbabilityOutcome,
    apply_instrument,
    average_after,
    average_before,
    conditional_after,
    conditional_before,
    conditional_change,
    outcome_probability,
    weak_value,
)
from .jaynes_cummings import (
    Fig1Setup,
    JCModelSpec,
    QubitCoherentState,
    build_fig1_model,
    build_jc_model,
    jc_hamiltonian,
    jc_unitary_closed_form,
    ladder_lower,
    ladder_raise,
    number_operator,
    number_pointer,
    qubit_coherent_state,
)
from .linalg import (
    DEFAULT_TOL,
    SpectralDecomposition,
    hermitian_eig,
    is_hermitian,
    is_psd,
    is_unitary,
    kron,
    partial_trace,
    psd_sqrt,
    unitary_from_generator,
)
from .scenario import (
    InvariantViolation,
    Scenario,
    ScenarioError,
    SweepSpec,
    fig1_scenario_path,
    load_scenario,
    parse_scenario,
)
from .objects import (
    DensityState,
    EffectSet,
    MeasurementModel,
    ObservableOp,
    PointerObservable,
    Violation,
    born_probability,
    induced_povm,
    validate,
)
from .symmetry import (
    ConservedQuantity,
    TheoremVerdict,
    blockwise_conditional_values,
    check_conservation,
    check_cross_elements_imaginary,
    check_symmetric_product_state,
    check_yanase,
    decohere,
    random_conserving_unitary,
    verify_theorem1,
    verify_theorem2,
)

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_TOL",
    "P_FLOOR",
    "ConditionalReport",
    "ConservedQuantity",
    "DensityState",
    "EffectSet",
    "Fig1Setup",
    "InvariantViolation",
    "JCModelSpec",
    "MeasurementModel",
    "ObservableOp",
    "PointerObservable",
    "QubitCoherentState",
    "Scenario",
    "ScenarioError",
    "SpectralDecomposition",
    "SweepSpec",
    "TheoremVerdict",
    "Violation",
    "ZeroProbabilityOutcome",
    "apply_instrument",
    "average_after",
    "average_before",
    "blockwise_conditional_values",
    "born_probability",
    "build_fig1_model",
    "build_jc_model",
    "check_conservation",
    "check_cross_elements_imaginary",
    "check_symmetric_product_state",
    "check_yanase",
    "conditional_after",
    "conditional_before",
    "conditional_change",
    "decohere",
    "fig1_scenario_path",
    "hermitian_eig",
    "induced_povm",
    "is_hermitian",
    "is_psd",
    "is_unitary",
    "jc_hamiltonian",
    "jc_unitary_closed_form",
    "kron",
    "ladder_lower",
    "ladder_raise",
    "load_scenario",
    "number_operator",
    "number_pointer",
    "outcome_probability",
    "parse_scenario",
    "partial_trace",
    "psd_sqrt",
    "qubit_coherent_state",
    "random_conserving_unitary",
    "unitary_from_generator",
    "validate",
    "verify_theorem1",
    "verify_theorem2",
    "weak_value",
    "__version__",
]

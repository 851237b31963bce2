"""qhide: activable bound entangled state families, their structural
properties, and a two-cbit data-hiding protocol with attack simulators."""

__version__ = "0.1.0"

from .linalg import (
    DENSE_QUBIT_CAP,
    DEFAULT_TOL,
    ContractViolationError,
    DensityMatrix,
    HermitianSpectrum,
    NumericalError,
    SizeLimitError,
    hermitian_eigen,
    maximally_mixed,
    overlap,
    partial_trace,
    partial_transpose,
    tensor_product,
    trace_distance,
)
from .family import (
    BellLabel,
    ConstructionError,
    GhzEnsemble,
    StateLabel,
    base_four,
    bell_projector,
    closed_form,
    compose,
    composition_table,
    ensemble_from_dict,
    ensemble_to_dict,
    family_states,
    recurse,
    recursion_chain,
    sparse_overlap,
    to_dense,
)
from .analysis import (
    Bipartition,
    PropertyReport,
    check_maximal_ignorance,
    check_permutation_symmetry,
    find_pauli_connection,
    ppt_min_eigenvalue,
)
from .measurement import (
    AdaptiveStrategy,
    MeasurementRecord,
    RNG_ALGORITHM,
    SingleQubitBasis,
    StrategyLeaf,
    StrategyNode,
    bell_measure_pair,
    born_distribution,
    rng_stream,
    run_strategy,
    sample_measure,
)
from .protocols import (
    AttackReport,
    HiddenInstance,
    StrategySamplerConfig,
    UnlockResult,
    coalition_attack,
    hide,
    parity_attack,
    random_locc_attack,
    reveal_global,
    unlock_attack,
    unlock_pair,
)

__all__ = [
    "__version__",
    "DENSE_QUBIT_CAP",
    "DEFAULT_TOL",
    "ContractViolationError",
    "DensityMatrix",
    "HermitianSpectrum",
    "NumericalError",
    "SizeLimitError",
    "hermitian_eigen",
    "maximally_mixed",
    "overlap",
    "partial_trace",
    "partial_transpose",
    "tensor_product",
    "trace_distance",
    "BellLabel",
    "ConstructionError",
    "GhzEnsemble",
    "StateLabel",
    "base_four",
    "bell_projector",
    "closed_form",
    "compose",
    "composition_table",
    "ensemble_from_dict",
    "ensemble_to_dict",
    "family_states",
    "recurse",
    "recursion_chain",
    "sparse_overlap",
    "to_dense",
    "Bipartition",
    "PropertyReport",
    "check_maximal_ignorance",
    "check_permutation_symmetry",
    "find_pauli_connection",
    "ppt_min_eigenvalue",
    "AdaptiveStrategy",
    "MeasurementRecord",
    "RNG_ALGORITHM",
    "SingleQubitBasis",
    "StrategyLeaf",
    "StrategyNode",
    "bell_measure_pair",
    "born_distribution",
    "rng_stream",
    "run_strategy",
    "sample_measure",
    "AttackReport",
    "HiddenInstance",
    "StrategySamplerConfig",
    "UnlockResult",
    "coalition_attack",
    "hide",
    "parity_attack",
    "random_locc_attack",
    "reveal_global",
    "unlock_attack",
    "unlock_pair",
]

"""K-sets+ clustering for sparse symmetric similarities and semi-metrics."""

from .delta import adjusted_delta, check_nonnegativity, delta, delta_triangular
from .engine import (
    EngineState,
    RunConfig,
    RunResult,
    fast_adjusted_delta,
    init_state,
    objective_value,
    random_balanced_partition,
    reassign_point,
    run,
    run_pass,
)
from .errors import (
    ArityMismatch,
    AsymmetricDuplicate,
    CoordinateOutOfRange,
    DuplicateEntry,
    EmptySet,
    EmptySetInPartition,
    IndexOutOfRange,
    InvalidProbability,
    KOutOfRange,
    KsetsError,
    NonSquareInput,
    NotACohesion,
    NotADistance,
    SigmaTooSmall,
    TooFewPoints,
    WouldEmptySet,
)
from .experiments import (
    GeoPoint,
    SbmParams,
    SignedGraph,
    SweepRow,
    accuracy_sweep,
    edge_accuracy,
    haversine_matrix,
    random_sparse_similarity,
    sbm_generate,
    similarity_from_signed,
)
from .measure import (
    DataSet,
    Partition,
    SparseSymmetricMeasure,
    build_from_triples,
    from_dense,
    measure_of_sets,
    symmetrize,
)
from .transforms import (
    SemiCohesionMeasure,
    ShiftReport,
    check_shift_lemma,
    dual_distance,
    induced_cohesion,
    lift_similarity,
    sigma_min,
)
from .verify import (
    ClusterReport,
    PairwiseReport,
    is_cluster,
    pairwise_isolation_check,
)

__version__ = "0.1.0"

__all__ = [
    "ArityMismatch",
    "AsymmetricDuplicate",
    "ClusterReport",
    "CoordinateOutOfRange",
    "DataSet",
    "DuplicateEntry",
    "EmptySet",
    "EmptySetInPartition",
    "EngineState",
    "GeoPoint",
    "IndexOutOfRange",
    "InvalidProbability",
    "KOutOfRange",
    "KsetsError",
    "NonSquareInput",
    "NotACohesion",
    "NotADistance",
    "PairwiseReport",
    "Partition",
    "RunConfig",
    "RunResult",
    "SbmParams",
    "SemiCohesionMeasure",
    "ShiftReport",
    "SigmaTooSmall",
    "SignedGraph",
    "SparseSymmetricMeasure",
    "SweepRow",
    "TooFewPoints",
    "WouldEmptySet",
    "accuracy_sweep",
    "adjusted_delta",
    "build_from_triples",
    "check_nonnegativity",
    "check_shift_lemma",
    "delta",
    "delta_triangular",
    "dual_distance",
    "edge_accuracy",
    "fast_adjusted_delta",
    "from_dense",
    "haversine_matrix",
    "induced_cohesion",
    "init_state",
    "is_cluster",
    "lift_similarity",
    "measure_of_sets",
    "objective_value",
    "pairwise_isolation_check",
    "random_balanced_partition",
    "random_sparse_similarity",
    "reassign_point",
    "run",
    "run_pass",
    "sbm_generate",
    "sigma_min",
    "similarity_from_signed",
    "symmetrize",
]

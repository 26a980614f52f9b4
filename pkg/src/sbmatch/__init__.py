"""Semi-streaming maximum-weight and submodular b-matching with queue ledgers."""

from .errors import (
    AssertionFailure,
    DependentInput,
    DoubleCommit,
    InstanceError,
    InvalidP,
    InvalidParams,
    InvalidSpec,
    MalformedLine,
    NotFinalized,
    SBMatchError,
    SelfLoop,
    TooLarge,
    UniformityMismatch,
    UnknownItem,
    UnknownVertex,
    DuplicateCapacity,
)
from .exact import ExactResult, brute_force_bmatching, exact_bmatching, exact_weighted_vs_gain
from .greedy import Matching, build
from .instance import (
    HyperEdge,
    Instance,
    MatroidSpec,
    ObjectiveSpec,
    generate_random,
    parse_instance,
    serialize_instance,
    with_coverage,
    with_cut,
    with_matroid,
)
from .ledger import MATROID, Ledger, QueueSet, StoredElement
from .matroids import (
    build_matroid,
    find_circuit,
    graphic_matroid,
    max_weight_base,
    partition_matroid,
    uniform_matroid,
)
from .objectives import (
    MarginalSession,
    build_objective,
    coverage_objective,
    cut_objective,
    linear_objective,
    session,
)
from .streaming import (
    StreamParams,
    StreamState,
    eviction_depth,
    finalize_topset,
    stream_matroid,
    stream_submodular,
    stream_weighted,
)

__version__ = "0.1.0"

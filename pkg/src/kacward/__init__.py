"""Exact even-subgraph generating functions and planar Ising partition
functions on straight-line embedded graphs, via the Kac-Ward determinant,
with brute-force oracles and a loop-calculus verification suite."""

from .decoration import Decoration, decorate, lift_loop
from .errors import (
    GraphFormatError,
    InvalidEmbeddingError,
    KacwardError,
    NumericalError,
)
from .graph import (
    Edge,
    EmbeddedGraph,
    Point,
    ValidationReport,
    Violation,
    connected_components,
    directed_pair,
    dump_graph,
    dumps_graph,
    edge_index,
    load_graph,
    loads_graph,
    max_degree,
    reverse_edge,
    turning_angle,
    validate_embedding,
)
from .lattices import (
    HighTemperatureWeights,
    IsingInstance,
    gen_hex,
    gen_square,
    ising_partition_kw,
    ising_to_even_weights,
    uniform_ising,
)
from .loops import (
    GenericCancellationReport,
    Loop,
    LoopStats,
    Walk,
    WalkWeight,
    concat,
    decompose_at_root,
    enumerate_rooted_loops,
    enumerate_walks,
    is_self_avoiding,
    loop_stats,
    multiplicity,
    reverse_walk,
    specific_cancellation_involution,
    truncated_loop_sum,
    verify_generic_cancellation,
    walk_weight,
)
from .oracle import (
    CycleBasis,
    EvenSubgraph,
    cycle_space_basis,
    enumerate_even_subgraphs_naive,
    even_subgraphs_from_basis,
    ising_partition_spin_sum,
    partition_function_oracle,
)
from .transition import (
    DetResult,
    TransitionMatrix,
    build_transition_matrix,
    check_convergence_radius,
    kac_ward_determinant,
    partition_function_kw,
)

__version__ = "0.1.0"

__all__ = [
    "CycleBasis",
    "Decoration",
    "DetResult",
    "Edge",
    "EmbeddedGraph",
    "EvenSubgraph",
    "GenericCancellationReport",
    "GraphFormatError",
    "HighTemperatureWeights",
    "InvalidEmbeddingError",
    "IsingInstance",
    "KacwardError",
    "Loop",
    "LoopStats",
    "NumericalError",
    "Point",
    "TransitionMatrix",
    "ValidationReport",
    "Violation",
    "Walk",
    "WalkWeight",
    "build_transition_matrix",
    "check_convergence_radius",
    "concat",
    "connected_components",
    "cycle_space_basis",
    "decompose_at_root",
    "decorate",
    "directed_pair",
    "dump_graph",
    "dumps_graph",
    "edge_index",
    "enumerate_even_subgraphs_naive",
    "enumerate_rooted_loops",
    "enumerate_walks",
    "even_subgraphs_from_basis",
    "gen_hex",
    "gen_square",
    "is_self_avoiding",
    "ising_partition_kw",
    "ising_partition_spin_sum",
    "ising_to_even_weights",
    "lift_loop",
    "load_graph",
    "loads_graph",
    "loop_stats",
    "max_degree",
    "multiplicity",
    "partition_function_kw",
    "partition_function_oracle",
    "reverse_edge",
    "reverse_walk",
    "specific_cancellation_involution",
    "truncated_loop_sum",
    "turning_angle",
    "uniform_ising",
    "validate_embedding",
    "verify_generic_cancellation",
    "walk_weight",
]

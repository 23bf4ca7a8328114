"""Rainbow vertex-disconnection colorings: exact solvers, a constructive
max-degree coloring for K4-minor-free graphs, and hardness-reduction gadgets,
all certified by an independent cut-witness verifier."""

from .graph import (
    Graph,
    VertexColoring,
    BlockDecomposition,
    ContractionResult,
    GraphError,
    ColoringError,
    parse_edge_list,
    emit_edge_list,
    parse_coloring,
    emit_coloring,
    to_dot,
    common_neighbors,
    m_set,
    t_set,
    contract_edge,
    block_decomposition,
    conflict_graph,
    is_connected,
)
from .verify import (
    CutWitness,
    VerificationReport,
    separates,
    find_rainbow_cut,
    verify_coloring,
    validate_witness,
)
from .exact import (
    BoundsReport,
    ExactResult,
    DeskScaleError,
    chromatic_number,
    independence_number,
    injective_chromatic_number,
    kfold_chromatic_number,
    bounds,
    rvd_exact,
)
from .recognize import (
    StructureKind,
    StructureLocator,
    is_k4_minor_free,
    find_structure,
    generate_sp_graph,
)
from .colorer import (
    ColoringTrace,
    TraceStep,
    color_k4mf,
    lift_contraction_coloring,
    build_h_graph,
)
from .gadgets import (
    GadgetResult,
    Role,
    ChainReport,
    bipartite_gadget,
    split_gadget,
    replicated_gadget,
    forward_coloring,
    backward_coloring,
    roundtrip_check,
    chain_check,
)

__version__ = "0.1.0"

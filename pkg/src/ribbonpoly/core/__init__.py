"""Ribbon graphs, spanning states and surgery."""

from .decomposition import ENDS_DEFAULT, ENDS_SWAP, MarkedPiece, PieceSlot, TwoDecomposition
from .graph import Edge, RibbonGraph, bouquet, cycle_graph, from_darts, make_graph, single_edge, single_vertex, validate
from .states import (
    SpanningState,
    StateEngine,
    all_states,
    boundary_components,
    component_count,
    engine,
    genus,
    mark_relation,
    orientable_marker,
    rank_nullity,
)
from .surgery import (
    BAR1,
    DDOT1,
    DDOT2,
    GTilde,
    SplitState,
    assemble,
    build_gtilde,
    classify,
    close_piece,
    contract_nonloop,
    delete,
    flip_vertex,
    insert_edge,
    split_state,
    tensor,
    two_sum,
    untwist,
)

"""Expanding-search ratios of rooted edge-weighted graphs.

The library computes, approximates and certifies the deterministic search
ratio (sigma) and the randomized search ratio (rho, the value of the
Searcher-Hider zero-sum game) of rooted graphs, together with the
strategies that witness the bounds.
"""

from .errors import (
    CapExceededError,
    DisconnectedGraphError,
    DuplicateEdgeError,
    EmptySetError,
    ExpandingSearchError,
    FormatError,
    GraphValidationError,
    IncompleteCoverError,
    InvalidParamsError,
    LengthBelowOneError,
    NotARootedSubtreeError,
    NotATreeError,
    NumericalFailureError,
    OutOfRegimeError,
    PreconditionViolatedError,
    PrefixNotTreeError,
    SearchValidationError,
    SelfLoopError,
    TooManyTerminalsForExactError,
    UnsupportedGraphClassError,
)
from .graphs import (
    DistanceMap,
    Edge,
    RootedGraph,
    ball_vertices,
    build_graph,
    contract_to_root,
    induced_ball_subgraph,
    shortest_distances,
    shortest_path_tree,
    star_closure,
)
from .search import (
    ExpandingSearch,
    HiderBound,
    HiderDistribution,
    MixedPayoffs,
    MixedSearch,
    PayoffTable,
    best_prefix_bound,
    expected_payoff,
    lemma1_bound,
    mixed_payoffs,
    pure_expected_payoff,
    search_ratio,
    search_times,
    validate_search,
)
from .deterministic import (
    DoublingResult,
    SteinerResult,
    brute_force_sigma,
    distance_order_search,
    doubling_search,
    sigma_closed_form,
    steiner_tree,
)
from .randomized import (
    DeepeningEstimate,
    DeepeningSample,
    StarRecursiveResult,
    StarState,
    deepening_ratio_estimate,
    deepening_sample,
    game_value_V,
    lift_star_strategy,
    rdfs,
    star_recursive_strategy,
    star_rho_formula,
    unweighted_inductive_strategy,
)
from .oracle import (
    GameSolution,
    PayoffMatrix,
    count_searches,
    enumerate_searches,
    exact_rho,
    payoff_matrix,
    solve_matrix_game,
    solve_zero_sum,
)
from .instances import (
    ReductionOutput,
    SatInstance,
    WitnessSearch,
    fig1_graph,
    gen_instance,
    sat_reduce,
    sat_witness_search,
)
from .formats import (
    ReportRow,
    read_dimacs,
    read_graph_text,
    rows_to_csv,
    write_graph_text,
)

__version__ = "0.1.0"

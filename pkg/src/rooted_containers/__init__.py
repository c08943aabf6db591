"""Container method for rooted 3-uniform hypergraphs, applied to union-free families."""

from .engine import (
    ContainerRun,
    EligibilityWitness,
    NotIndependentError,
    ParameterError,
    Params,
    certify_derivation,
    eligibility_witness,
    greedy_bounded_subgraph,
    is_core,
    is_eligible,
    max_bounded_subgraph,
    max_bounded_subgraph_edges,
    reconstruct,
    run_container,
    validate_params,
)
from .family import (
    BoundReport,
    ContainerRecord,
    binary_entropy,
    check_entropy_bound,
    collect_container_family,
    container_count_bound,
    generate_synthetic_rooted,
    iterate_containers,
    reconstruct_record,
    sum_binomials,
)
from .hypergraph import (
    Graph,
    RootedHypergraph,
    build_hypergraph,
    count_independent_sets,
    head_degree,
    head_link_graph,
    induced,
    is_independent,
    verify_rooted,
)
from .unionfree import (
    alpha_bounds,
    build_union_hypergraph,
    count_union_free,
    is_union_free,
    middle_layer,
)

__version__ = "0.1.0"

"""Exact algorithms for bicluster editing with vertex splitting."""

from .graphs import (
    BipartiteGraph,
    GraphError,
    TwinClassDecomposition,
    VertexRef,
    build_graph,
    connected_components,
    distance,
    find_conflict_geodesic,
    geodesic_packing_bound,
    is_biclique_union,
    twin_classes,
)
from .editing import (
    CopyId,
    EdgeAdd,
    EdgeDelete,
    EditedGraph,
    Instance,
    Mode,
    OperationError,
    Split,
    ValidationResult,
    add,
    apply_sequence,
    copy_of,
    delete,
    sequence_cost,
    split,
    validate_solution,
)
from .covers import (
    APartitioningCover,
    BiclusterCover,
    CoverCostBreakdown,
    CoverError,
    bicover_cost,
    bicover_to_sequence,
    check_bicover,
    check_cover,
    components_as_cover,
    cover_cost,
    cover_to_sequence,
    is_twin_adapted,
    sequence_to_cover,
    twin_adapt,
)
from .solvers import (
    BudgetExceeded,
    SolveResult,
    SolverRefused,
    min_split_biclique_cover,
    minimum_bicover,
    oracle_search,
    solve_bcevs,
    solve_bceovs,
)
from .trees import TreeNumbering, number_tree, solve_tree
from .kernel import (
    BoundCheckResult,
    KernelOutcome,
    bound_check,
    cap_twin_classes,
    kernelize,
    per_component_size_bound,
    remove_biclique_components,
)
from .generators import (
    CnfError,
    CnfFormula,
    ReductionMap,
    assignment_to_sequence,
    family,
    figure1_graph,
    make_formula,
    parse_dimacs_cnf,
    random_planted,
    sat_to_instance,
)

__version__ = "0.1.0"

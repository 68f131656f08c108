"""Perfect sampling of spin-system configurations via recursive boundary splitting."""

from .analysis import (
    BranchingBound,
    GofStats,
    branching_bound,
    goodness_of_fit,
    hardcore_radius1_bound,
    lemma1_check,
    verify_tree_bound,
)
from .errors import SsmsError
from .graph import (
    FiniteGraph,
    Lattice,
    LineGraph,
    LocalGraph,
    RegularTree,
    complete_graph,
    cycle_graph,
    graph_from_spec,
    grid_graph,
    line_graph,
    load_edge_list,
    path_graph,
    petersen_graph,
    star_graph,
)
from .marginals import (
    MixingRate,
    conditional_marginal,
    estimate_mixing_rate,
    min_marginals,
    mixing_rate_estimate,
    tv_distance,
)
from .sampler import (
    DEFAULT_BUDGET,
    IntervalPartition,
    RandomSource,
    RecursionStats,
    RunReport,
    WindowSampler,
    bounded_ssms,
    build_intervals,
    sample_window,
    ssms,
)
from .spinsys import (
    PartialConfiguration,
    SpinSystem,
    coloring,
    config_weight,
    hardcore,
    is_feasible,
    ising,
    partition_function,
)
from .verify import (
    SuiteResult,
    acceptance_matrix,
    box_occupation,
    hardcore_box_bracket,
    lattice_occupation_check,
    run_suite,
)

__version__ = "0.1.0"

__all__ = [
    "BranchingBound",
    "DEFAULT_BUDGET",
    "FiniteGraph",
    "GofStats",
    "IntervalPartition",
    "Lattice",
    "LineGraph",
    "LocalGraph",
    "MixingRate",
    "PartialConfiguration",
    "RandomSource",
    "RecursionStats",
    "RegularTree",
    "RunReport",
    "SpinSystem",
    "SsmsError",
    "SuiteResult",
    "WindowSampler",
    "acceptance_matrix",
    "bounded_ssms",
    "box_occupation",
    "branching_bound",
    "build_intervals",
    "coloring",
    "complete_graph",
    "conditional_marginal",
    "config_weight",
    "cycle_graph",
    "estimate_mixing_rate",
    "goodness_of_fit",
    "graph_from_spec",
    "grid_graph",
    "hardcore",
    "hardcore_box_bracket",
    "hardcore_radius1_bound",
    "is_feasible",
    "ising",
    "lattice_occupation_check",
    "lemma1_check",
    "line_graph",
    "load_edge_list",
    "min_marginals",
    "mixing_rate_estimate",
    "partition_function",
    "path_graph",
    "petersen_graph",
    "run_suite",
    "sample_window",
    "ssms",
    "star_graph",
    "tv_distance",
    "verify_tree_bound",
]

"""Network creation games under greedy routing on exact metric spaces."""

from .analysis import (
    AdditiveSlack,
    AgentWitness,
    BruteForceOptimum,
    ComponentBudget,
    EquilibriumReport,
    ExactStability,
    MultiplicativeSlack,
    PoaReport,
    brute_force_reachable,
    brute_force_social_optimum,
    component_edge_budget_check,
    parse_criterion,
    poa_report,
    so_lower_bound,
    verify_equilibrium,
)
from .covers import (
    BestResponseResult,
    CoverError,
    CoverResult,
    GreedyRoutingSet,
    SearchBudget,
    SolveMode,
    best_response,
    is_greedy_routing_set,
    minimum_cover,
    minimum_greedy_routing_set,
    one_hop_cover_masks,
    residual_routing_degree,
    routing_degree,
)
from .directed import (
    DirectedOptimum,
    construct_directed_optimum,
    is_structural_equilibrium,
)
from .dynamics import (
    DynamicsStatus,
    DynamicsStep,
    DynamicsTrace,
    RandomSeeded,
    RoundRobin,
    Schedule,
    Scripted,
    parse_schedule,
    profile_fingerprint,
    run_dynamics,
)
from .fileio import (
    FileFormatError,
    load_algorithm_trace,
    load_document,
    load_dynamics_trace,
    load_network,
    load_points_csv,
    load_profile,
    load_space,
    save_algorithm_trace,
    save_dynamics_trace,
    save_network,
    save_points_csv,
    save_profile,
    save_space,
)
from .geometry import (
    KISSING_NUMBERS,
    DegenerateInputError,
    NngGraph,
    build_nng,
    delaunay_2d,
    kissing_number,
    nearest_neighbor,
    nearest_neighbor_sets,
    nng_edges,
    peeling_cover,
)
from .instances import (
    BestResponseCycle,
    Clustered,
    CycleInstance,
    GadgetInstance,
    Grid,
    Line,
    PoaFamilyInstance,
    PoaLowerBoundFamily,
    SetCoverGadget,
    UniformSquare,
    complete_profile,
    empty_profile,
    random_profile,
)
from .metric import (
    EuclideanSpace,
    GeneralMetric,
    MetricAxiomError,
    MetricError,
    MetricFormatError,
    Ordering,
    Space,
    ValidationReport,
    Violation,
    compare_distances,
    distance_squared,
    validate_metric,
)
from .network import (
    CostReport,
    GameError,
    GreedyPath,
    Network,
    StrategyProfile,
    Variant,
    agent_cost,
    cost_report,
    extract_greedy_path,
    greedy_reachable_to,
    induce_network,
    is_greedy_connected,
    is_navigable,
    reach_masks,
    social_cost,
    undirected_edge,
    usable_hops,
)
from .render import RenderError, render_svg, to_dot
from .undirected import (
    AgentBudgetCheck,
    AgentCriticalReport,
    AlgorithmError,
    AlgorithmMode,
    AlgorithmTrace,
    AlphaConsistencyReport,
    CriticalAnalysis,
    CriticalBestResponse,
    EdgeClassification,
    EdgeTag,
    Infeasible,
    Orientation,
    alpha_consistency_check,
    classify_edges,
    compute_approximate_ne,
    critical_analysis,
    critical_best_response,
    critical_incident_set,
    default_mode,
    filter_redundant_edges,
    hakimi_orient,
)

__version__ = "0.1.0"

"""Occupancy processes on finite graphs.

Stochastic simulation, the deterministic companion map, exact small-graph
oracles, and numerical concentration bounds (random-walk, polynomial,
mean-field and diagonal), with line-graph tools for dynamic random graphs.
"""

from .bounds import (
    BoundReport,
    bound_report,
    cor_meanfield_bound,
    diag_distance,
    prop_diag_bound,
    thm_main_bound,
    thm_main_simplified,
    thm_poly_bound,
)
from .dynamics import (
    TrajectoryEnsemble,
    deterministic_step,
    deterministic_trajectory,
    neighborhood_average,
    run_trajectories,
    stochastic_step,
)
from .experiments import (
    DeviationEstimate,
    ScalingFit,
    degree_scaling_study,
    diagonal_concentration_run,
    estimate_from_samples,
    estimate_neighborhood_deviation,
    estimate_polynomial_deviation,
    hom_density_scaling,
    standard_sweep,
)
from .estimators import NeighborhoodBound, OccupancyProcess
from .exceptions import ArgumentError, CapacityError, GraphParseError, OccupancyError, ValidationError
from .graph import (
    Graph,
    WalkDistribution,
    complete_graph,
    cycle_graph,
    dump_edge_list,
    erdos_renyi,
    line_graph,
    line_graph_complete,
    load_edge_list,
    walk_distribution,
)
from .interaction import (
    FunctionSpec,
    InteractionPair,
    gamma,
    gamma_tilde_orbit,
    memoryless_logistic,
    memoryless_pair,
    parse_function,
    parse_pair,
    theta,
    voter_pair,
)
from .observables import (
    MOTIFS,
    Motif,
    Polynomial,
    check_membership,
    evaluate_polynomial,
    homomorphism_density,
    motif_polynomial,
    neighborhood_polynomial,
    norms,
)
from .oracle import ExactChain, exact_observable_deviation, exact_step, exact_vertex_expectation

__version__ = "0.1.0"

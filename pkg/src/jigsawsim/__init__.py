"""Jigsaw percolation: cluster-merging dynamics driven by two graphs.

A puzzle graph and a random people graph share one vertex set.  Starting
from singleton clusters, clusters merge whenever they are joined in both
graphs at once, and the instance is solved when everything collapses to
a single cluster.  This package provides the merging engine, graph
generators, sharp-threshold theory, and Monte Carlo experiment drivers.
"""

from .engine import (ClusterState, JigsawInstance, MergeRule, TrialOutcome,
                     initial_round, is_internally_solved, run,
                     run_contraction, step)
from .generators import (DegreeSequence, Seed, cycle_puzzle, erdos_renyi,
                         power_law_degrees, power_law_people,
                         puzzle_from_file, random_tree_puzzle, star_puzzle,
                         torus_puzzle)
from .graph import (Graph, are_adjacent, connected_components,
                    graph_from_edges, is_connected, load_edge_list,
                    max_degree, save_edge_list)
from .experiments import (EstimationError, PcEstimate, StepStats, SweepPoint,
                          default_p_grid, estimate_pc, estimate_solve_prob,
                          power_law_failure_check, step_statistics, sweep,
                          sweep_csv, sweep_detailed, sweep_jsonl,
                          wilson_interval)
from .theory import (BlockPartition, CutCertificate, block_partition,
                     find_cut_certificate, lower_bound_pc_ring,
                     not_x_good_bound, ring_lower_objective, theta,
                     theta_sum_error_bound, upper_bound_pc)

__version__ = "0.1.0"

__all__ = [
    "BlockPartition",
    "ClusterState",
    "CutCertificate",
    "DegreeSequence",
    "EstimationError",
    "Graph",
    "JigsawInstance",
    "MergeRule",
    "PcEstimate",
    "Seed",
    "StepStats",
    "SweepPoint",
    "TrialOutcome",
    "are_adjacent",
    "block_partition",
    "connected_components",
    "cycle_puzzle",
    "default_p_grid",
    "erdos_renyi",
    "estimate_pc",
    "estimate_solve_prob",
    "find_cut_certificate",
    "graph_from_edges",
    "initial_round",
    "is_connected",
    "is_internally_solved",
    "load_edge_list",
    "lower_bound_pc_ring",
    "max_degree",
    "not_x_good_bound",
    "power_law_degrees",
    "power_law_failure_check",
    "power_law_people",
    "puzzle_from_file",
    "random_tree_puzzle",
    "ring_lower_objective",
    "run",
    "run_contraction",
    "save_edge_list",
    "star_puzzle",
    "step",
    "step_statistics",
    "sweep",
    "sweep_csv",
    "sweep_detailed",
    "sweep_jsonl",
    "theta",
    "theta_sum_error_bound",
    "torus_puzzle",
    "upper_bound_pc",
    "wilson_interval",
    "__version__",
]

"""Deadline-aware broadcast with joint rate selection and XOR coding."""

from .baselines import BaselineConfig, run_baseline, run_dsf, run_index_coding, run_rlnc, run_sin1
from .clique import max_weight_clique_exact, max_weight_clique_heuristic
from .graph import CodingGraph, Subgraph, build_graph, clique_to_transmission
from .harness import (ExperimentResult, GeneratorConfig, sweep_presets, generate_scenario,
                      run_experiment, run_pairwise_experiment)
from .model import (EPS, InstanceTooLarge, Scenario, Schedule, Transmission, ValidationReport,
                    deadline_miss_ratio, evaluate_schedule, load_scenario, validate_scenario)
from .pairwise import (PairwiseInstance, enumerate_pairwise, exact_pairwise, exact_pairwise_milp,
                       greedy_pairwise, khuller_greedy)
from .scheduler import compute_metric_u, run_rsnc, run_rsnc_exact, select_transmission

__version__ = "0.1.0"

__all__ = [
    "BaselineConfig", "CodingGraph", "EPS", "ExperimentResult", "GeneratorConfig",
    "InstanceTooLarge", "PairwiseInstance", "Scenario", "Schedule", "Subgraph", "Transmission",
    "ValidationReport", "build_graph", "clique_to_transmission", "compute_metric_u",
    "deadline_miss_ratio", "enumerate_pairwise", "evaluate_schedule", "exact_pairwise",
    "exact_pairwise_milp", "sweep_presets", "generate_scenario", "greedy_pairwise",
    "khuller_greedy", "load_scenario", "max_weight_clique_exact", "max_weight_clique_heuristic",
    "run_baseline", "run_dsf", "run_experiment", "run_index_coding", "run_pairwise_experiment",
    "run_rlnc", "run_rsnc", "run_rsnc_exact", "run_sin1", "select_transmission",
    "validate_scenario",
]

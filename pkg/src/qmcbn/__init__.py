"""Quasi-Monte Carlo sampling engine for discrete Bayesian networks.

Core layers: `lds` (Halton/Sobol/Faure generators), `discrepancy` (uniformity
measures and the direction-number search), `bn` (networks and exact inference),
`sampling` (logic and importance sampling over interchangeable number streams),
and `bench` (the convergence experiment harness). `service` wraps everything in
an HTTP API and `cli` is a thin client over the same request models.
"""

from .bench import ExperimentSpec, emit_results, fit_alpha, run_convergence
from .bn import (
    BayesNet,
    Evidence,
    MarginalSet,
    Node,
    brute_force_marginals,
    joint_probability,
    parse_evidence,
    parse_network,
    serialize_network,
    topological_order,
    variable_elimination,
)
from .discrepancy import (
    UniformitySearchConfig,
    cell_uniformity,
    search_direction_numbers,
    star_discrepancy_exact,
)
from .sampling import (
    EstimationResult,
    ImportanceFunction,
    RandomStream,
    TableIsf,
    draw_node_state,
    importance_estimate,
    likelihood_weighting_isf,
    load_isf_table,
    logic_sample,
    pls_estimate,
    rmse_metric,
)

__all__ = [
    "BayesNet",
    "EstimationResult",
    "Evidence",
    "ExperimentSpec",
    "ImportanceFunction",
    "MarginalSet",
    "Node",
    "RandomStream",
    "TableIsf",
    "UniformitySearchConfig",
    "brute_force_marginals",
    "cell_uniformity",
    "draw_node_state",
    "emit_results",
    "fit_alpha",
    "importance_estimate",
    "joint_probability",
    "likelihood_weighting_isf",
    "load_isf_table",
    "logic_sample",
    "parse_evidence",
    "parse_network",
    "pls_estimate",
    "rmse_metric",
    "run_convergence",
    "search_direction_numbers",
    "serialize_network",
    "star_discrepancy_exact",
    "topological_order",
    "variable_elimination",
]

"""Two-community detection on directed and undirected graphs via
permutation-standardized edge-count statistics.

The pipeline: fit partitions maximizing Z_w (assortative), minimizing Z_w
(disassortative), and maximizing Z_d (core-periphery), then pick the mixing
type with a selection criterion (penalized block likelihood or the gamma-tau
signal comparison).
"""

from .edgestats import (MomentSet, Partition, flip_delta, modularity_q,
                        perm_null_moments, q_d, r_d, r_w, within_counts, z_d,
                        z_w)
from .evaluation import EvalRecord, misclassification_rate, success_rate
from .genmodels import (ConnectivityMatrix, PlantedGraph, ThetaSpec,
                        replicate_rngs, sample_dcsbm, sample_sbm,
                        sample_theta)
from .graph import (Graph, GraphConstants, GraphFormatError, graph_constants,
                    load_edge_list)
from .optimizer import (CANDIDATE_KINDS, FitConfig, FitResult, Objective,
                        exhaustive_fit, fit_all_candidates, greedy_fit)
from .oracle import (TheoremGridReport, enumerate_null_moments,
                     expected_counts_sbm, expected_edge_total,
                     verify_theorem_2_3)
from .selection import (BlockEstimates, CriterionScores, DegenerateError,
                        SelectionOutcome, ThetaEstimates, estimate_block_probs,
                        gamma_sq, gamma_tau_select, penalized_loglik,
                        penalized_select, tau_sq, theta_mle)

__version__ = "0.1.0"

__all__ = [
    "CANDIDATE_KINDS", "BlockEstimates", "ConnectivityMatrix",
    "CriterionScores", "DegenerateError", "EvalRecord", "FitConfig",
    "FitResult", "Graph", "GraphConstants", "GraphFormatError", "MomentSet",
    "Objective", "Partition", "PlantedGraph", "SelectionOutcome",
    "TheoremGridReport", "ThetaEstimates", "ThetaSpec",
    "enumerate_null_moments", "estimate_block_probs", "exhaustive_fit",
    "expected_counts_sbm", "expected_edge_total", "fit_all_candidates",
    "flip_delta", "gamma_sq", "gamma_tau_select", "graph_constants",
    "greedy_fit", "load_edge_list", "misclassification_rate", "modularity_q",
    "penalized_loglik", "penalized_select", "perm_null_moments", "q_d", "r_d",
    "r_w", "replicate_rngs", "sample_dcsbm", "sample_sbm", "sample_theta",
    "success_rate", "tau_sq", "theta_mle", "verify_theorem_2_3",
    "within_counts", "z_d", "z_w",
]

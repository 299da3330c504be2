"""
Degree heterogeneity and what it costs
======================================

The degree-corrected model multiplies each pair probability by theta_i theta_j
with mean-1 node multipliers. Heavier-tailed multipliers produce hub-dominated
graphs, and recovery gets harder even though the block structure is unchanged.
"""

import numpy as np

from bicomm import (ConnectivityMatrix, FitConfig, Objective, ThetaSpec,
                    greedy_fit, misclassification_rate, replicate_rngs,
                    sample_dcsbm)

P = ConnectivityMatrix.from_rows([[0.5, 0.3], [0.3, 0.5]])

print("assortative model, 50+50 nodes, undirected, 20 replicates per law\n")
print(f"{'theta law':24s} {'mean error':>10s} {'max degree':>11s} {'clamped':>8s}")

for spec in (ThetaSpec.constant1(),
             ThetaSpec.pareto(9),
             ThetaSpec.pareto(6),
             ThetaSpec.pareto(3),
             ThetaSpec.uniform_low(0.2),
             ThetaSpec.shifted_exponential(2.0)):
    errs = []
    max_deg = 0
    clamped = 0
    for rep in range(20):
        rng, fit_seed = replicate_rngs(11, rep)
        pg = sample_dcsbm(P, 50, 50, spec, directed=False, rng=rng)
        fit = greedy_fit(pg.graph, Objective.ZW_MAX,
                         FitConfig(restarts=10, seed=fit_seed))
        errs.append(misclassification_rate(pg.truth, fit.labels))
        max_deg = max(max_deg, int(pg.graph.degrees.max()))
        clamped += pg.clamped_pairs
    label = spec.kind if spec.param is None else f"{spec.kind}:{spec.param:g}"
    print(f"{label:24s} {np.mean(errs):10.3f} {max_deg:11d} {clamped:8d}")

print("\nThe constant law is the plain block model: no clamping, lowest error.")
print("Every heterogeneous law pays for its spread — errors grow with the")
print("tail weight (pareto:9 -> pareto:3) — and whenever theta_i theta_j P")
print("exceeds one for a hub pair, the probability is truncated and counted")
print("in the clamped column. At this density even the bounded uniform law")
print("clamps (1.8 * 1.8 * 0.5 > 1); only dropping P or the spread avoids it.")

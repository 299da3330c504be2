"""Choosing among the three fitted candidates (Z_w-max, Z_w-min, Z_d): the
gamma-tau signal criterion and the penalized block-likelihood criterion."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .edgestats import as_labels, within_counts
from .genmodels import ConnectivityMatrix
from .graph import Graph
from .optimizer import CANDIDATE_KINDS, FitResult

_CLAMP_EPS = 1e-9
DEFAULT_LAMBDA = 0.12


class DegenerateError(RuntimeError):
    """Every candidate was degenerate; no selection is possible."""


@dataclass(frozen=True)
class BlockEstimates:
    """Plug-in block parameters from one partition: edge densities per
    ordered block pair, group proportions, group sizes."""
    p_hat: ConnectivityMatrix
    pi_hat: tuple[float, float]
    sizes: tuple[int, int]


@dataclass(frozen=True)
class ThetaEstimates:
    """Degree-ratio multipliers: theta_hat[i] is node i's degree over the
    average degree of its block (in+out degree for directed graphs).  Block
    variances are population variances; a zero-degree block gets all-ones
    multipliers and variance 0."""
    theta_hat: np.ndarray
    var_block1: float
    var_block2: float


@dataclass(frozen=True)
class CriterionScores:
    """Scores backing a selection: N-scaled gamma^2/tau^2 values for the
    signal criterion, per-candidate penalized log-likelihoods otherwise."""
    n_gamma_sq: float | None = None
    n_tau_sq_max: float | None = None
    n_tau_sq_min: float | None = None
    pen_loglik: dict[str, float] | None = None
    lam: float | None = None


@dataclass(frozen=True)
class SelectionOutcome:
    selected: str
    criterion: str
    scores: CriterionScores
    tied: bool = False
    excluded: tuple[str, ...] = ()
    clamp_events: int = 0


def estimate_block_probs(g: Graph, x) -> BlockEstimates:
    """Edge densities per block pair under the labeling ``x``: within-block
    counts over available pairs (ordered pairs for directed graphs,
    unordered for undirected)."""
    lab = as_labels(x, g.n_nodes)
    m_x = int(lab.sum())
    n_x = lab.size - m_x
    if min(m_x, n_x) < 2:
        raise ValueError("both groups need at least 2 nodes")
    e = g.edges
    a = lab[e[:, 0]]
    b = lab[e[:, 1]]
    r1 = int(np.count_nonzero(a & b))
    r2 = int(np.count_nonzero((1 - a) & (1 - b)))
    e12 = int(np.count_nonzero(a & (1 - b)))
    e21 = int(np.count_nonzero((1 - a) & b))
    if g.directed:
        p11 = r1 / (m_x * (m_x - 1))
        p22 = r2 / (n_x * (n_x - 1))
        p12 = e12 / (m_x * n_x)
        p21 = e21 / (m_x * n_x)
    else:
        p11 = r1 / (m_x * (m_x - 1) / 2)
        p22 = r2 / (n_x * (n_x - 1) / 2)
        p12 = p21 = (e12 + e21) / (m_x * n_x)
    n = lab.size
    return BlockEstimates(
        p_hat=ConnectivityMatrix(p11, p12, p21, p22),
        pi_hat=(m_x / n, n_x / n), sizes=(m_x, n_x))


def gamma_sq(est: BlockEstimates) -> float:
    """Squared core-periphery signal: how far the difference statistic's
    population drift is from zero, normalized by the largest block density."""
    p = est.p_hat
    pmax = max(p.p11, p.p12, p.p21, p.p22)
    if pmax == 0.0:
        return 0.0
    pi1, pi2 = est.pi_hat
    num = 2 * pi1 * p.p11 - 2 * pi2 * p.p22 - (pi1 - pi2) * (p.p12 + p.p21)
    return num * num / pmax


def tau_sq(est: BlockEstimates) -> float:
    """Squared (dis)assortativity signal for the weighted statistic."""
    p = est.p_hat
    pmax = max(p.p11, p.p12, p.p21, p.p22)
    if pmax == 0.0:
        return 0.0
    num = p.p11 + p.p22 - p.p12 - p.p21
    return num * num / pmax


def _active_candidates(candidates):
    fits = {}
    excluded = []
    for kind in CANDIDATE_KINDS:
        if kind not in candidates:
            raise ValueError(f"missing candidate {kind!r}")
        fit = candidates[kind]
        if fit.degenerate:
            excluded.append(kind)
        else:
            fits[kind] = fit
    if not fits:
        raise DegenerateError("all candidates degenerate")
    return fits, tuple(excluded)


def _argmax_in_order(scores):
    selected = None
    best = -np.inf
    for kind in CANDIDATE_KINDS:
        if kind in scores and scores[kind] > best:
            best = scores[kind]
            selected = kind
    tied = sum(1 for v in scores.values() if v == best) > 1
    return selected, tied


def gamma_tau_select(g: Graph, candidates: dict[str, FitResult]) -> SelectionOutcome:
    """Score each candidate's own partition by its matching N-scaled signal
    (N tau-hat^2 for the weighted fits, N gamma-hat^2 for the difference fit)
    and keep the largest."""
    fits, excluded = _active_candidates(candidates)
    n = g.n_nodes
    scores = {}
    for kind, fit in fits.items():
        est = estimate_block_probs(g, fit.labels)
        scores[kind] = n * (gamma_sq(est) if kind == "zd" else tau_sq(est))
    selected, tied = _argmax_in_order(scores)
    return SelectionOutcome(
        selected=selected, criterion="gamma-tau",
        scores=CriterionScores(
            n_gamma_sq=scores.get("zd"),
            n_tau_sq_max=scores.get("zw-max"),
            n_tau_sq_min=scores.get("zw-min")),
        tied=tied, excluded=excluded)


def theta_mle(g: Graph, x) -> ThetaEstimates:
    lab = as_labels(x, g.n_nodes)
    if g.directed:
        deg = (g.k_in + g.k_out).astype(np.float64)
    else:
        deg = g.k_out.astype(np.float64)
    theta = np.ones(g.n_nodes)
    variances = []
    for label in (1, 0):
        sel = lab == label
        if not sel.any():
            variances.append(0.0)
            continue
        avg = deg[sel].mean()
        if avg > 0:
            theta[sel] = deg[sel] / avg
        variances.append(float(theta[sel].var()))
    return ThetaEstimates(theta_hat=theta, var_block1=variances[0],
                          var_block2=variances[1])


def _penalized_details(g, x, lam, kind):
    lab = as_labels(x, g.n_nodes)
    est = estimate_block_probs(g, lab)
    th = theta_mle(g, lab)
    blocks = np.where(lab == 1, 0, 1)
    base = est.p_hat.as_array()[blocks[:, None], blocks[None, :]]
    probs = base * th.theta_hat[:, None] * th.theta_hat[None, :]

    n = g.n_nodes
    if g.directed:
        mask = ~np.eye(n, dtype=bool)
    else:
        mask = np.triu(np.ones((n, n), dtype=bool), k=1)
    pvals = probs[mask]
    clamps = int(np.count_nonzero((pvals < _CLAMP_EPS)
                                  | (pvals > 1.0 - _CLAMP_EPS)))
    pvals = np.clip(pvals, _CLAMP_EPS, 1.0 - _CLAMP_EPS)
    avals = g.adjacency()[mask]

    loglik = float(np.where(avals, np.log(pvals), np.log1p(-pvals)).sum())

    r1, r2 = within_counts(g, lab)
    if kind == "zd":
        penalty = lam * max(th.var_block1 * r1, th.var_block2 * r2)
    else:
        penalty = lam * (th.var_block1 + th.var_block2) * g.n_edges
    return loglik - penalty, clamps


def penalized_loglik(g: Graph, x, lam: float = DEFAULT_LAMBDA,
                     kind: str = "zw-max") -> float:
    """Bernoulli block log-likelihood with plug-in block densities and
    degree multipliers, minus a heterogeneity penalty.

    Pair probabilities clamp(P_hat * theta_i theta_j, 1e-9, 1 - 1e-9) are
    summed over ordered pairs i != j (directed) or unordered pairs
    (undirected).  The penalty is lam * (sum of block theta variances) *
    (total edges) for the weighted-statistic candidates; the difference
    candidate instead pays lam * max over blocks of (block theta variance *
    that block's own within edges), so heterogeneity outside a dense core is
    not over-charged.
    """
    if lam < 0:
        raise ValueError("lambda must be >= 0")
    if kind not in CANDIDATE_KINDS:
        raise ValueError(f"unknown candidate kind {kind!r}")
    value, _ = _penalized_details(g, x, lam, kind)
    return value


def penalized_select(g: Graph, candidates: dict[str, FitResult],
                     lam: float = DEFAULT_LAMBDA) -> SelectionOutcome:
    """Evaluate the penalized log-likelihood of each candidate (each with the
    penalty form matching its kind) and keep the argmax."""
    if lam < 0:
        raise ValueError("lambda must be >= 0")
    fits, excluded = _active_candidates(candidates)
    scores = {}
    clamp_total = 0
    for kind, fit in fits.items():
        value, clamps = _penalized_details(g, fit.labels, lam, kind)
        scores[kind] = value
        clamp_total += clamps
    selected, tied = _argmax_in_order(scores)
    return SelectionOutcome(
        selected=selected, criterion="penalized",
        scores=CriterionScores(pen_loglik=dict(scores), lam=lam),
        tied=tied, excluded=excluded, clamp_events=clamp_total)

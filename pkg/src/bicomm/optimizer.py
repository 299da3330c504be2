"""Multi-restart greedy single-flip search over two-community partitions,
plus an exhaustive search for small-graph validation."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .edgestats import (Partition, as_labels, modularity_q, moment_arrays,
                        q_d, within_counts, z_d, z_w)
from .graph import Graph, graph_constants

_IMPROVE_EPS = 1e-12  # strict improvement threshold: no cycling on plateaus
_CHECK_EVERY = 100    # incremental bookkeeping audited against full recounts


class Objective(enum.Enum):
    """A statistic paired with a search direction.

    ZW_MIN is run as maximization of -Z_w; every kind is a maximization
    internally, and ``FitResult.value`` is the maximized quantity (so it is
    -Z_w for ZW_MIN).
    """
    ZW_MAX = "zw-max"
    ZW_MIN = "zw-min"
    ZD_MAX = "zd"
    Q_MAX = "modularity"
    QD_MAX = "qd"


_Z_FAMILY = (Objective.ZW_MAX, Objective.ZW_MIN, Objective.ZD_MAX)


@dataclass(frozen=True)
class FitConfig:
    """Search knobs.

    restarts  : independent random initializations (restart r is seeded with
                seed + r, so runs are order-independent)
    min_group : smallest group size any visited partition may have (>= 2;
                the null variance of R_w needs two nodes on each side)
    warm_start: optional partition used in place of the random start of
                restart 0
    max_iters : per-restart flip cap; defaults to N^2
    """
    restarts: int = 20
    seed: int = 0
    min_group: int = 2
    warm_start: Partition | None = None
    max_iters: int | None = None

    def __post_init__(self):
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        if self.min_group < 2:
            raise ValueError("min_group must be >= 2")
        if self.seed < 0:
            raise ValueError("seed must be non-negative")


@dataclass
class FitResult:
    """Outcome of a search.

    value is the maximized objective at ``labels`` and equals
    max(restart_values); iterations counts accepted flips over all restarts.
    A degenerate result means the objective carried no signal anywhere
    (zero null variance for every reachable group size): value is 0 and
    labels are just the initial partition.
    """
    labels: Partition
    value: float
    restart_values: list[float] = field(default_factory=list)
    iterations: int = 0
    degenerate: bool = False
    objective: Objective | None = None


def _z_values(kind, r1, r2, m, n_nodes, tables):
    """Objective values from within counts; works on scalars or arrays.
    Degenerate group sizes give 0, invalid ones NaN."""
    mu_w, s_w, mu_d, s_d, deg_w, deg_d = tables
    m = np.asarray(m, dtype=np.intp)
    r1 = np.asarray(r1, dtype=np.float64)
    r2 = np.asarray(r2, dtype=np.float64)
    nx_ = n_nodes - m
    with np.errstate(divide="ignore", invalid="ignore"):
        if kind is Objective.ZD_MAX:
            z = (r1 - r2 - mu_d[m]) / s_d[m]
            z = np.where(deg_d[m] & ~np.isnan(mu_d[m]), 0.0, z)
        else:
            rw = ((nx_ - 1) * r1 + (m - 1) * r2) / (n_nodes - 2)
            z = (rw - mu_w[m]) / s_w[m]
            z = np.where(deg_w[m] & ~np.isnan(mu_w[m]), 0.0, z)
            if kind is Objective.ZW_MIN:
                z = -z
    return z


def _q_values(kind, r1, r2, ko1, ki1, ko0, ki0, total, directed):
    """Modularity-family values from counts and block degree sums."""
    r1 = np.asarray(r1, dtype=np.float64)
    r2 = np.asarray(r2, dtype=np.float64)
    if directed:
        t1 = r1 - ko1 * ki1 / total
        t2 = r2 - ko0 * ki0 / total
    else:
        t1 = 2.0 * r1 - ko1 * ki1 / (2.0 * total)
        t2 = 2.0 * r2 - ko0 * ki0 / (2.0 * total)
    return t1 - t2 if kind is Objective.QD_MAX else t1 + t2


def _fresh_value(g, lab, obj, c):
    """From-scratch objective evaluation (used for bookkeeping audits and
    the returned value's final verification)."""
    if obj is Objective.ZW_MAX:
        return z_w(g, lab, c)
    if obj is Objective.ZW_MIN:
        return -z_w(g, lab, c)
    if obj is Objective.ZD_MAX:
        return z_d(g, lab, c)
    if obj is Objective.Q_MAX:
        return modularity_q(g, lab)
    return q_d(g, lab)


def _random_valid_labels(rng, n, min_group):
    # fair-coin labels, rejection-resampled until both groups are big enough
    while True:
        lab = (rng.random(n) < 0.5).astype(np.int8)
        m = int(lab.sum())
        if min_group <= m <= n - min_group:
            return lab


def _all_degenerate(obj, tables, n, min_group):
    if obj not in _Z_FAMILY:
        return False
    flags = tables[5] if obj is Objective.ZD_MAX else tables[4]
    ms = np.arange(min_group, n - min_group + 1)
    return bool(np.all(flags[ms]))


def greedy_fit(g: Graph, obj: Objective, cfg: FitConfig | None = None) -> FitResult:
    """Best-improvement single-flip local search with random restarts.

    Each sweep prices all N candidate flips at once (O(N + |E|) per sweep via
    incident-edge bookkeeping), applies the best strictly-improving one (ties
    to the lowest node index), and stops at a local optimum.  The best
    terminal partition across restarts is returned.
    """
    cfg = cfg if cfg is not None else FitConfig()
    n = g.n_nodes
    if n < 2 * cfg.min_group + 1:
        raise ValueError(
            f"need at least {2 * cfg.min_group + 1} nodes for any flip to be valid")
    if obj not in _Z_FAMILY and g.n_edges == 0:
        raise ValueError("modularity objectives need a non-empty graph")

    c = graph_constants(g)
    tables = moment_arrays(c) if obj in _Z_FAMILY else None
    max_iters = cfg.max_iters if cfg.max_iters is not None else n * n

    warm = None
    if cfg.warm_start is not None:
        warm = as_labels(cfg.warm_start, n).copy()
        mw = int(warm.sum())
        if not cfg.min_group <= mw <= n - cfg.min_group:
            raise ValueError("warm_start violates the minimum group size")

    if tables is not None and _all_degenerate(obj, tables, n, cfg.min_group):
        lab0 = warm if warm is not None else _random_valid_labels(
            np.random.default_rng(cfg.seed), n, cfg.min_group)
        return FitResult(labels=Partition(lab0), value=0.0,
                         restart_values=[0.0] * cfg.restarts, iterations=0,
                         degenerate=True, objective=obj)

    indptr, indices = g.incidence()
    inc_counts = np.diff(indptr)
    ends = np.repeat(np.arange(n), inc_counts)
    k_out = g.k_out.astype(np.float64)
    k_in = g.k_in.astype(np.float64)
    total = float(g.n_edges)
    directed = g.directed

    best_val = -np.inf
    best_lab = None
    restart_values = []
    total_flips = 0

    for r in range(cfg.restarts):
        if r == 0 and warm is not None:
            lab = warm.copy()
        else:
            rng = np.random.default_rng(cfg.seed + r)
            lab = _random_valid_labels(rng, n, cfg.min_group)

        m1 = int(lab.sum())
        r1, r2 = within_counts(g, lab)
        in1 = (lab[indices] == 1).astype(np.float64)
        w1 = np.bincount(ends, weights=in1, minlength=n).astype(np.int64)
        w0 = inc_counts - w1
        if obj in _Z_FAMILY:
            cur = float(_z_values(obj, r1, r2, m1, n, tables))
        else:
            sel = lab == 1
            ko1 = float(k_out[sel].sum())
            ki1 = float(k_in[sel].sum())
            ko0 = float(k_out.sum() - ko1)
            ki0 = float(k_in.sum() - ki1)
            cur = float(_q_values(obj, r1, r2, ko1, ki1, ko0, ki0,
                                  total, directed))

        iters = 0
        while iters < max_iters:
            is1 = lab == 1
            dr1 = np.where(is1, -w1, w1)
            dr2 = np.where(is1, w0, -w0)
            m_new = m1 + np.where(is1, -1, 1)
            r1n = r1 + dr1
            r2n = r2 + dr2
            valid = (m_new >= cfg.min_group) & (m_new <= n - cfg.min_group)
            if obj in _Z_FAMILY:
                vals = _z_values(obj, r1n, r2n, m_new, n, tables)
            else:
                ko1n = ko1 + np.where(is1, -k_out, k_out)
                ki1n = ki1 + np.where(is1, -k_in, k_in)
                vals = _q_values(obj, r1n, r2n, ko1n, ki1n,
                                 ko0 + ko1 - ko1n, ki0 + ki1 - ki1n,
                                 total, directed)
            vals = np.where(valid, vals, -np.inf)
            vals = np.where(np.isnan(vals), -np.inf, vals)
            b = int(np.argmax(vals))
            bv = float(vals[b])
            if not np.isfinite(bv) or bv <= cur + _IMPROVE_EPS:
                break

            to_zero = lab[b] == 1
            r1 += int(dr1[b])
            r2 += int(dr2[b])
            m1 = int(m_new[b])
            if obj not in _Z_FAMILY:
                sgn = -1.0 if to_zero else 1.0
                ko1 += sgn * k_out[b]
                ki1 += sgn * k_in[b]
                ko0 -= sgn * k_out[b]
                ki0 -= sgn * k_in[b]
            nb = indices[indptr[b]:indptr[b + 1]]
            if to_zero:
                np.add.at(w1, nb, -1)
                np.add.at(w0, nb, 1)
                lab[b] = 0
            else:
                np.add.at(w1, nb, 1)
                np.add.at(w0, nb, -1)
                lab[b] = 1
            cur = bv
            iters += 1
            total_flips += 1

            if total_flips % _CHECK_EVERY == 0:
                fr1, fr2 = within_counts(g, lab)
                fresh = _fresh_value(g, lab, obj, c)
                if (fr1, fr2) != (r1, r2) or abs(fresh - cur) > 1e-9 * (1 + abs(cur)):
                    raise RuntimeError("incremental bookkeeping drifted from "
                                       "the from-scratch objective")

        restart_values.append(cur)
        if cur > best_val:
            best_val = cur
            best_lab = lab.copy()

    return FitResult(labels=Partition(best_lab), value=float(best_val),
                     restart_values=restart_values, iterations=total_flips,
                     degenerate=False, objective=obj)


def exhaustive_fit(g: Graph, obj: Objective, min_group: int = 2) -> FitResult:
    """Global optimum by enumerating all 2^N label vectors (N <= 16).

    Vectors are generated with node 0 as the most significant bit, so ties
    resolve to the lexicographically smallest label vector.
    """
    n = g.n_nodes
    if n > 16:
        raise ValueError("exhaustive search is limited to 16 nodes")
    if min_group < 2:
        raise ValueError("min_group must be >= 2")
    if n < 2 * min_group:
        raise ValueError("no valid partition at this min_group")
    if obj not in _Z_FAMILY and g.n_edges == 0:
        raise ValueError("modularity objectives need a non-empty graph")

    shifts = np.arange(n - 1, -1, -1)
    vecs = ((np.arange(1 << n, dtype=np.int64)[:, None] >> shifts) & 1).astype(np.int8)
    m = vecs.sum(axis=1, dtype=np.int64)
    valid = (m >= min_group) & (m <= n - min_group)

    r1 = np.zeros(1 << n, dtype=np.int64)
    r2 = np.zeros(1 << n, dtype=np.int64)
    for u, v in g.edges:
        a = vecs[:, u]
        b = vecs[:, v]
        r1 += a & b
        r2 += (1 - a) & (1 - b)

    degenerate = False
    if obj in _Z_FAMILY:
        c = graph_constants(g)
        tables = moment_arrays(c)
        vals = _z_values(obj, r1, r2, m, n, tables)
        degenerate = _all_degenerate(obj, tables, n, min_group)
    else:
        ko1 = vecs.astype(np.float64) @ g.k_out
        ki1 = vecs.astype(np.float64) @ g.k_in
        ko0 = float(g.k_out.sum()) - ko1
        ki0 = float(g.k_in.sum()) - ki1
        vals = _q_values(obj, r1, r2, ko1, ki1, ko0, ki0,
                         float(g.n_edges), g.directed)
    vals = np.where(valid, vals, -np.inf)
    vals = np.where(np.isnan(vals), -np.inf, vals)
    b = int(np.argmax(vals))
    return FitResult(labels=Partition(vecs[b]), value=float(vals[b]),
                     restart_values=[float(vals[b])], iterations=0,
                     degenerate=degenerate, objective=obj)


CANDIDATE_KINDS = ("zw-max", "zw-min", "zd")


def fit_all_candidates(g: Graph, cfg: FitConfig | None = None) -> dict[str, FitResult]:
    """Fit the three mixing-type candidates (Z_w-max, Z_w-min, Z_d)."""
    return {kind: greedy_fit(g, Objective(kind), cfg)
            for kind in CANDIDATE_KINDS}

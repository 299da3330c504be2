"""Within-community edge counts, permutation-null moments, the standardized
statistics Z_w and Z_d, and the reference objectives Q and Q_d."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import Graph, GraphConstants, graph_constants

# A variance below this multiple of (|G|^2 + 1) is treated as exactly zero:
# the statistic carries no signal and its Z value is defined to be 0.
_DEGENERATE_REL = 1e-12


class Partition:
    """Binary labeling of the nodes; label 1 marks community 1.

    ``m_x`` is the size of community 1, ``n_x`` the size of community 0.
    """

    __slots__ = ("labels",)

    def __init__(self, labels):
        a = np.asarray(labels)
        if a.ndim != 1 or a.size == 0:
            raise ValueError("labels must be a non-empty 1-d array")
        if not np.all((a == 0) | (a == 1)):
            raise ValueError("labels must be 0/1")
        a = a.astype(np.int8)
        a.setflags(write=False)
        self.labels = a

    @property
    def m_x(self):
        return int(self.labels.sum())

    @property
    def n_x(self):
        return self.labels.size - self.m_x

    def complement(self):
        return Partition(1 - self.labels)

    def __len__(self):
        return self.labels.size

    def __eq__(self, other):
        if isinstance(other, Partition):
            return np.array_equal(self.labels, other.labels)
        return NotImplemented

    def __repr__(self):
        return f"Partition(m_x={self.m_x}, n_x={self.n_x})"


def as_labels(x, n_nodes=None):
    """Coerce a Partition or 0/1 array-like into a validated int8 array."""
    lab = x.labels if isinstance(x, Partition) else Partition(x).labels
    if n_nodes is not None and lab.size != n_nodes:
        raise ValueError(f"labels length {lab.size} != number of nodes {n_nodes}")
    return lab


@dataclass(frozen=True)
class MomentSet:
    """Permutation-null mean/sd of R_w and R_d for one (graph, m_x) pair.

    A degenerate flag means the exact null variance vanished (up to the
    relative threshold) and the corresponding Z statistic is defined as 0.
    """
    mu_w: float
    sigma_w: float
    mu_d: float
    sigma_d: float
    var_w: float
    var_d: float
    degenerate_w: bool
    degenerate_d: bool


def within_counts(g: Graph, x):
    """(R1, R2): edges with both endpoints labeled 1, resp. both labeled 0.

    Directed edges are counted once each, in either orientation.
    """
    lab = as_labels(x, g.n_nodes)
    e = g.edges
    a = lab[e[:, 0]]
    b = lab[e[:, 1]]
    r1 = int(np.count_nonzero(a & b))
    r2 = int(np.count_nonzero((1 - a) & (1 - b)))
    return r1, r2


def r_d(g: Graph, x):
    """R_d = R1 - R2, the within-count difference."""
    r1, r2 = within_counts(g, x)
    return r1 - r2


def r_w(g: Graph, x):
    """R_w = ((n_x - 1) R1 + (m_x - 1) R2) / (N - 2), the size-weighted
    within-count that equalizes the two groups' null contributions."""
    lab = as_labels(x, g.n_nodes)
    n = lab.size
    if n < 3:
        raise ValueError("R_w needs at least 3 nodes")
    m_x = int(lab.sum())
    n_x = n - m_x
    r1, r2 = within_counts(g, lab)
    return ((n_x - 1) * r1 + (m_x - 1) * r2) / (n - 2)


def perm_null_moments(c: GraphConstants, m_x: int, n_x: int) -> MomentSet:
    """Exact permutation-null moments of R_w and R_d for group sizes
    (m_x, n_x) on a graph with counting constants ``c``.

    Requires m_x, n_x >= 2 (the variance of R_w involves both group sizes
    minus one) and N = m_x + n_x equal to the graph's node count.
    """
    m_x = int(m_x)
    n_x = int(n_x)
    if m_x < 2 or n_x < 2:
        raise ValueError("both groups need at least 2 nodes")
    n = m_x + n_x
    if n != c.n_nodes:
        raise ValueError(f"m_x + n_x = {n} != N = {c.n_nodes}")
    gsz = float(c.g_size)
    q1 = float(c.q1)
    q2 = float(c.q2)

    mu_w = (m_x - 1) * (n_x - 1) * gsz / ((n - 1) * (n - 2))
    var_w = (m_x * n_x * (m_x - 1) * (n_x - 1)
             / (n * (n - 1) * (n - 2) ** 2)
             * (gsz + q1 - gsz * gsz / (n - 1) + q2 / (n - 3)))
    mu_d = (m_x - n_x) * gsz / n
    var_d = (m_x * n_x / (n * (n - 1))
             * (gsz + q1 + gsz * gsz * (n - 4) / n - q2))

    thresh = _DEGENERATE_REL * (gsz * gsz + 1.0)
    deg_w = var_w < thresh
    deg_d = var_d < thresh
    if deg_w:
        var_w = 0.0
    if deg_d:
        var_d = 0.0
    return MomentSet(mu_w=mu_w, sigma_w=float(np.sqrt(var_w)),
                     mu_d=mu_d, sigma_d=float(np.sqrt(var_d)),
                     var_w=float(var_w), var_d=float(var_d),
                     degenerate_w=bool(deg_w), degenerate_d=bool(deg_d))


def _checked_sizes(g, x):
    lab = as_labels(x, g.n_nodes)
    m_x = int(lab.sum())
    n_x = lab.size - m_x
    if min(m_x, n_x) < 2:
        raise ValueError("Z statistics need both groups of size >= 2")
    return lab, m_x, n_x


def z_w(g: Graph, x, c: GraphConstants | None = None):
    """Standardized within-edge statistic (R_w - mu_w) / sigma_w; 0.0 when
    the null variance is degenerate."""
    lab, m_x, n_x = _checked_sizes(g, x)
    if c is None:
        c = graph_constants(g)
    mom = perm_null_moments(c, m_x, n_x)
    if mom.degenerate_w:
        return 0.0
    return (r_w(g, lab) - mom.mu_w) / mom.sigma_w


def z_d(g: Graph, x, c: GraphConstants | None = None):
    """Standardized difference statistic (R_d - mu_d) / sigma_d; 0.0 when
    the null variance is degenerate."""
    lab, m_x, n_x = _checked_sizes(g, x)
    if c is None:
        c = graph_constants(g)
    mom = perm_null_moments(c, m_x, n_x)
    if mom.degenerate_d:
        return 0.0
    return (r_d(g, lab) - mom.mu_d) / mom.sigma_d


def _degree_group_sums(g, lab):
    in1 = lab == 1
    if g.directed:
        ko1 = float(g.k_out[in1].sum())
        ko0 = float(g.k_out[~in1].sum())
        ki1 = float(g.k_in[in1].sum())
        ki0 = float(g.k_in[~in1].sum())
        return ko1, ki1, ko0, ki0
    k1 = float(g.k_out[in1].sum())
    k0 = float(g.k_out[~in1].sum())
    return k1, k1, k0, k0


def modularity_q(g: Graph, x):
    """Unnormalized modularity: sum over ordered same-community node pairs of
    A_ij - (degree product)/(edge total).

    Undirected: sum_ij (A_ij - k_i k_j / (2 m)) over pairs in the same
    community (m the undirected edge count).  Directed: A_ij - k_i^out
    k_j^in / |G|.  The diagonal is included in the degree-product term, which
    makes the all-in-one-community value exactly 0.
    """
    if g.n_edges == 0:
        raise ValueError("modularity is undefined on an empty graph")
    lab = as_labels(x, g.n_nodes)
    r1, r2 = within_counts(g, lab)
    ko1, ki1, ko0, ki0 = _degree_group_sums(g, lab)
    if g.directed:
        tot = float(g.n_edges)
        return (r1 + r2) - (ko1 * ki1 + ko0 * ki0) / tot
    tot = 2.0 * g.n_edges
    return 2.0 * (r1 + r2) - (ko1 * ki1 + ko0 * ki0) / tot


def q_d(g: Graph, x):
    """Signed variant of Q: community-1 terms count +1, community-0 terms
    count -1, cross pairs 0.  Antisymmetric under label complement."""
    if g.n_edges == 0:
        raise ValueError("q_d is undefined on an empty graph")
    lab = as_labels(x, g.n_nodes)
    r1, r2 = within_counts(g, lab)
    ko1, ki1, ko0, ki0 = _degree_group_sums(g, lab)
    if g.directed:
        tot = float(g.n_edges)
        return (r1 - ko1 * ki1 / tot) - (r2 - ko0 * ki0 / tot)
    tot = 2.0 * g.n_edges
    return (2.0 * r1 - ko1 * ki1 / tot) - (2.0 * r2 - ko0 * ki0 / tot)


def flip_delta(g: Graph, x, i: int):
    """Change (dR1, dR2) in the within counts if node i's label flips.

    Costs O(deg i): only edges incident to i can change sides.  Directed
    incidences i->j and j->i both count.
    """
    lab = as_labels(x, g.n_nodes)
    i = int(i)
    if not 0 <= i < g.n_nodes:
        raise ValueError("node index out of range")
    inc = g.incident_nodes(i)
    c1 = int(np.count_nonzero(lab[inc] == 1))
    c0 = inc.size - c1
    if lab[i] == 1:
        return -c1, c0
    return c1, -c0


def moment_arrays(c: GraphConstants):
    """Vectorized permutation-null moments for every group size.

    Returns arrays indexed by m_x in 0..N: (mu_w, sigma_w, mu_d, sigma_d,
    degenerate_w, degenerate_d); entries outside 2 <= m_x <= N-2 are NaN.
    Used by the search loops to price candidate flips in bulk.
    """
    n = c.n_nodes
    gsz = float(c.g_size)
    q1 = float(c.q1)
    q2 = float(c.q2)
    m = np.arange(n + 1, dtype=np.float64)
    nx_ = n - m
    with np.errstate(invalid="ignore"):
        mu_w = (m - 1) * (nx_ - 1) * gsz / ((n - 1) * (n - 2))
        var_w = (m * nx_ * (m - 1) * (nx_ - 1) / (n * (n - 1) * (n - 2) ** 2)
                 * (gsz + q1 - gsz * gsz / (n - 1) + q2 / (n - 3)))
        mu_d = (m - nx_) * gsz / n
        var_d = (m * nx_ / (n * (n - 1))
                 * (gsz + q1 + gsz * gsz * (n - 4) / n - q2))
    thresh = _DEGENERATE_REL * (gsz * gsz + 1.0)
    deg_w = var_w < thresh
    deg_d = var_d < thresh
    var_w = np.where(deg_w, 0.0, var_w)
    var_d = np.where(deg_d, 0.0, var_d)
    invalid = (m < 2) | (m > n - 2)
    for arr in (mu_w, var_w, mu_d, var_d):
        arr[invalid] = np.nan
    deg_w[invalid] = True
    deg_d[invalid] = True
    return mu_w, np.sqrt(var_w), mu_d, np.sqrt(var_d), deg_w, deg_d

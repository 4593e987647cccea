"""Exact null moments of the within-sample edge counts.

The tests condition on the similarity graph and randomize only over the 2^n
within-pair label swaps (each pair sends one node to sample 1 and the other
to sample 2, independently and uniformly). Within-pair edges can never join
two equal labels, so every moment is a function of the cross-pair subgraph
alone. Four integer summaries of that subgraph determine everything:

* ``m``    number of cross-pair edges,
* ``deg``  per-node degree vector,
* ``c1``   unordered pairs of edges that are partner images of each other,
           {(i, j), (i*, j*)},
* ``c2``   unordered pairs of distinct edges sharing an endpoint whose other
           endpoints are partners, {(i, j), (i, j*)}.

Writing q = m + 2*c1 - 2*c2 and s = sum over pairs of the squared degree
difference (deg(i) - deg(i*))^2, the counts R1 (both endpoints labeled 1)
and R2 (both labeled 2) satisfy

    E(R1) = E(R2)     = m / 4
    Var(R1) = Var(R2) = (q + s) / 16
    Cov(R1, R2)       = (q - s) / 16
    Var(R1 + R2) = q / 4        Var(R1 - R2) = s / 4

All counting is done in 64-bit integers; floats appear only in the final
division, so every moment is an exact binary fraction.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .core import PooledIndex, ValidationError
from .graph import SimilarityGraph

__all__ = [
    "CrossPairGraph",
    "NullMoments",
    "ConditionDiagnostics",
    "extract_cross_pair_graph",
    "null_moments",
    "condition_diagnostics",
    "census_q3",
]


@dataclass(frozen=True)
class CrossPairGraph:
    """The similarity graph with within-pair edges removed, plus cached counts."""

    edges: np.ndarray  # (m, 2) int64, u < v, no edge joins a node to its partner
    deg: np.ndarray  # degree of every pooled node
    c1: int
    c2: int

    @property
    def n_edges(self) -> int:
        return self.edges.shape[0]

    @property
    def n_nodes(self) -> int:
        return self.deg.shape[0]

    @property
    def n_pairs(self) -> int:
        return self.deg.shape[0] // 2


@dataclass(frozen=True)
class NullMoments:
    """First and second moments of (R1, R2) under the label-swap null."""

    e_r1: float
    var_r1: float
    cov_r12: float
    var_sum: float  # Var(R1 + R2)
    var_diff: float  # Var(R1 - R2)

    @property
    def sigma_r(self) -> np.ndarray:
        return np.array(
            [[self.var_r1, self.cov_r12], [self.cov_r12, self.var_r1]]
        )


@dataclass(frozen=True)
class ConditionDiagnostics:
    """Raw graph quantities governing the quality of the normal limit.

    ``sum_ab`` adds, over every cross-pair edge e, the product of the sizes of
    its one-step and two-step pair-neighborhoods (edges touching e's endpoints
    or their partners, and the union of those edges' neighborhoods). Small
    ``ab_ratio`` = sum_ab / q3^1.5 indicates a healthy normal approximation.
    No pass/fail verdict is attached: these are reported raw.
    """

    sum_ab: int
    sum_degdiff_sq: int
    q3: int
    ab_ratio: float | None


def extract_cross_pair_graph(
    graph: SimilarityGraph, index: PooledIndex
) -> CrossPairGraph:
    """Drop within-pair edges and compute degrees and the c1/c2 pair counts."""
    n_nodes = index.n_nodes
    if graph.n_nodes != n_nodes:
        raise ValidationError(
            f"graph has {graph.n_nodes} nodes but index expects {n_nodes}"
        )
    edges = graph.edges
    if edges.size and edges.max() >= n_nodes:
        raise ValidationError("edge endpoint out of range for the pooled index")
    partner = index.partner_array()
    if edges.size:
        keep = partner[edges[:, 0]] != edges[:, 1]
        edges = edges[keep]
    edges = np.ascontiguousarray(edges, dtype=np.int64)

    deg = np.bincount(edges.ravel(), minlength=n_nodes).astype(np.int64)

    if edges.shape[0] == 0:
        c1 = c2 = 0
    else:
        u, v = edges[:, 0], edges[:, 1]
        keys = u * n_nodes + v
        # c1: edge (u, v) whose partner image (u*, v*) is also present; each
        # unordered pair of mirror-image edges is detected from both sides.
        mu, mv = partner[u], partner[v]
        mirror = np.minimum(mu, mv) * n_nodes + np.maximum(mu, mv)
        c1 = int(np.isin(mirror, keys).sum()) // 2
        # c2: directed incidences (i, j) such that (i, j*) is also an edge;
        # each unordered pair {(i, j), (i, j*)} is detected from both of its
        # j-side endpoints.
        di = np.concatenate([u, v])
        dj = np.concatenate([v, u])
        dir_keys = di * n_nodes + dj
        swapped = di * n_nodes + partner[dj]
        c2 = int(np.isin(swapped, dir_keys).sum()) // 2

    edges.setflags(write=False)
    deg.setflags(write=False)
    return CrossPairGraph(edges=edges, deg=deg, c1=c1, c2=c2)


def _q_and_s(cross: CrossPairGraph) -> tuple[int, int]:
    n = cross.n_pairs
    q = cross.n_edges + 2 * cross.c1 - 2 * cross.c2
    diff = cross.deg[:n] - cross.deg[n:]
    s = int(np.dot(diff, diff))
    return q, s


def null_moments(cross: CrossPairGraph, index: PooledIndex) -> NullMoments:
    """Closed-form moments of (R1, R2); exact binary fractions."""
    if cross.n_nodes != index.n_nodes:
        raise ValidationError("cross-pair graph does not match the pooled index")
    q, s = _q_and_s(cross)
    return NullMoments(
        e_r1=cross.n_edges / 4.0,
        var_r1=(q + s) / 16.0,
        cov_r12=(q - s) / 16.0,
        var_sum=q / 4.0,
        var_diff=s / 4.0,
    )


def condition_diagnostics(
    cross: CrossPairGraph, index: PooledIndex
) -> ConditionDiagnostics:
    """Pair-neighborhood sizes and the two variance numerators."""
    if cross.n_nodes != index.n_nodes:
        raise ValidationError("cross-pair graph does not match the pooled index")
    q, s = _q_and_s(cross)
    m = cross.n_edges
    if m == 0:
        return ConditionDiagnostics(0, 0, 0, None)

    partner = index.partner_array()
    incident: list[list[int]] = [[] for _ in range(cross.n_nodes)]
    for eid, (a, b) in enumerate(cross.edges):
        incident[a].append(eid)
        incident[b].append(eid)

    neighborhoods = []
    for a, b in cross.edges:
        ids = (
            incident[a]
            + incident[partner[a]]
            + incident[b]
            + incident[partner[b]]
        )
        neighborhoods.append(np.unique(np.array(ids, dtype=np.int64)))

    sum_ab = 0
    for hood in neighborhoods:
        two_step = np.unique(np.concatenate([neighborhoods[f] for f in hood]))
        sum_ab += hood.size * two_step.size

    ratio = float(sum_ab / q**1.5) if q > 0 else None
    return ConditionDiagnostics(
        sum_ab=int(sum_ab), sum_degdiff_sq=s, q3=q, ab_ratio=ratio
    )


def census_q3(cross: CrossPairGraph, index: PooledIndex) -> int:
    """Recompute q3 by brute-force census over pairs of pairs.

    Every cross-pair edge joins exactly two pairs, so grouping edges by the
    unordered pair of pairs they connect partitions the graph into groups of
    at most 4 edges. Each group contributes

        (#edges) + 2 * (#edge pairs sharing no node)
                 - 2 * (#edge pairs sharing a node)

    and the grand total equals m + 2*c1 - 2*c2. This is an independent path
    to q3 used as a cross-check.
    """
    if cross.n_nodes != index.n_nodes:
        raise ValidationError("cross-pair graph does not match the pooled index")
    if cross.n_edges == 0:
        return 0
    n = index.n
    u, v = cross.edges[:, 0], cross.edges[:, 1]
    pu = np.where(u < n, u, u - n)
    pv = np.where(v < n, v, v - n)
    group = np.minimum(pu, pv) * n + np.maximum(pu, pv)
    order = np.argsort(group, kind="stable")
    total = 0
    for _, members in itertools.groupby(order, key=lambda eid: group[eid]):
        ids = list(members)
        total += len(ids)
        for a, b in itertools.combinations(ids, 2):
            shared = len(
                {int(u[a]), int(v[a])} & {int(u[b]), int(v[b])}
            )
            total += -2 if shared else 2
    return total

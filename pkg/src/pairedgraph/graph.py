"""Distance matrices and k-MST similarity graphs on pooled observations.

The k-MST is the union of k successive spanning trees: tree i is the minimum
spanning tree of the complete distance graph with the edges of trees 1..i-1
removed. Ties in edge weight are broken by (weight, smaller endpoint, larger
endpoint), so construction is fully deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist

from .core import ValidationError

__all__ = [
    "DisconnectedError",
    "DistanceMatrix",
    "SimilarityGraph",
    "distance_matrix",
    "precomputed_distance",
    "build_mst",
    "build_kmst",
    "graph_weight",
]

_METRICS = {"euclidean": "euclidean", "manhattan": "cityblock"}


class DisconnectedError(RuntimeError):
    """No spanning tree exists once the excluded edges are removed."""

    def __init__(self, message: str, level: int = 1) -> None:
        super().__init__(message)
        self.level = level


@dataclass(frozen=True)
class DistanceMatrix:
    """Symmetric, non-negative, zero-diagonal inter-point distances."""

    dist: np.ndarray
    metric: str

    def __post_init__(self) -> None:
        d = np.asarray(self.dist, dtype=float)
        if d.ndim != 2 or d.shape[0] != d.shape[1]:
            raise ValidationError(f"distance matrix must be square, got {d.shape}")
        if d.shape[0] < 2:
            raise ValidationError("distance matrix needs at least 2 nodes")
        if not np.isfinite(d).all():
            raise ValidationError("distance matrix contains non-finite entries")
        if (d < 0).any():
            raise ValidationError("distance matrix contains negative entries")
        if not np.array_equal(d, d.T):
            raise ValidationError("distance matrix is not symmetric")
        if np.any(np.diag(d) != 0.0):
            raise ValidationError("distance matrix diagonal must be zero")
        out = np.array(d, copy=True)
        out.setflags(write=False)
        object.__setattr__(self, "dist", out)

    @property
    def n_nodes(self) -> int:
        return self.dist.shape[0]


def distance_matrix(pooled, metric: str = "euclidean") -> DistanceMatrix:
    """Pairwise distances between the rows of ``pooled``."""
    if metric not in _METRICS:
        raise ValidationError(
            f"unknown metric {metric!r}; expected one of {sorted(_METRICS)} "
            "or a precomputed matrix"
        )
    points = np.asarray(pooled, dtype=float)
    if points.ndim != 2:
        raise ValidationError("pooled observations must be a 2-D matrix")
    if not np.isfinite(points).all():
        raise ValidationError("pooled observations contain non-finite entries")
    return DistanceMatrix(cdist(points, points, metric=_METRICS[metric]), metric)


def precomputed_distance(matrix) -> DistanceMatrix:
    """Wrap a user-supplied distance matrix (any metric, already evaluated)."""
    return DistanceMatrix(np.asarray(matrix, dtype=float), "precomputed")


@dataclass(frozen=True)
class SimilarityGraph:
    """Undirected edge set over pooled nodes.

    ``edges`` is an (m, 2) integer array with u < v per row, rows sorted
    lexicographically. ``k`` records the MST multiplicity when the graph was
    built as a k-MST (0 for ad hoc edge sets).
    """

    edges: np.ndarray
    n_nodes: int
    k: int = 0

    def __post_init__(self) -> None:
        edges = np.asarray(self.edges, dtype=np.int64).reshape(-1, 2)
        if edges.size:
            lo = edges.min(axis=1)
            hi = edges.max(axis=1)
            if (lo == hi).any():
                raise ValidationError("self-loops are not allowed")
            if lo.min() < 0 or hi.max() >= self.n_nodes:
                raise ValidationError("edge endpoint out of range")
            edges = np.stack([lo, hi], axis=1)
            keys = lo * self.n_nodes + hi
            if np.unique(keys).size != keys.size:
                raise ValidationError("duplicate edges are not allowed")
            edges = edges[np.lexsort((edges[:, 1], edges[:, 0]))]
        edges.setflags(write=False)
        object.__setattr__(self, "edges", edges)

    @property
    def n_edges(self) -> int:
        return self.edges.shape[0]


def _sorted_candidates(dist: DistanceMatrix):
    """Upper-triangle edges sorted by (weight, u, v)."""
    n = dist.n_nodes
    iu, iv = np.triu_indices(n, 1)
    w = dist.dist[iu, iv]
    order = np.lexsort((iv, iu, w))
    return iu[order], iv[order]


def _spanning_pass(us, vs, n_nodes: int, banned: bytearray, level: int):
    """One Kruskal pass over the pre-sorted candidate list.

    Marks the chosen positions in ``banned`` (so later levels skip them) and
    returns them. Raises DisconnectedError if no spanning tree completes.
    """
    parent = list(range(n_nodes))
    size = [1] * n_nodes
    chosen = []
    need = n_nodes - 1
    for pos in range(len(us)):
        if banned[pos]:
            continue
        a = us[pos]
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        b = vs[pos]
        while parent[b] != b:
            parent[b] = parent[parent[b]]
            b = parent[b]
        if a == b:
            continue
        if size[a] < size[b]:
            a, b = b, a
        parent[b] = a
        size[a] += size[b]
        banned[pos] = 1
        chosen.append(pos)
        if len(chosen) == need:
            return chosen
    raise DisconnectedError(
        f"graph is disconnected at MST level {level}: only {len(chosen)} of "
        f"{need} tree edges available",
        level=level,
    )


def build_mst(dist: DistanceMatrix, excluded=()) -> SimilarityGraph:
    """Minimum spanning tree avoiding the ``excluded`` edges."""
    n = dist.n_nodes
    iu, iv = _sorted_candidates(dist)
    us = iu.tolist()
    vs = iv.tolist()
    banned = bytearray(len(us))
    excluded = list(excluded)
    if excluded:
        position = {(u, v): pos for pos, (u, v) in enumerate(zip(us, vs))}
        for a, b in excluded:
            a, b = int(a), int(b)
            lo, hi = (a, b) if a < b else (b, a)
            if lo == hi or lo < 0 or hi >= n:
                raise ValidationError(f"invalid excluded edge ({a}, {b})")
            banned[position[(lo, hi)]] = 1
    chosen = _spanning_pass(us, vs, n, banned, level=1)
    edges = [(us[pos], vs[pos]) for pos in chosen]
    return SimilarityGraph(np.array(edges, dtype=np.int64), n, k=1)


def build_kmst(dist: DistanceMatrix, k: int = 5) -> SimilarityGraph:
    """Union of k successive edge-disjoint minimum spanning trees."""
    if int(k) != k or k < 1:
        raise ValidationError(f"k must be a positive integer, got {k!r}")
    k = int(k)
    n = dist.n_nodes
    if k > n // 2:
        raise ValidationError(
            f"k={k} exceeds floor(N/2)={n // 2}: the complete graph on {n} "
            f"nodes cannot hold {k} edge-disjoint spanning trees"
        )
    iu, iv = _sorted_candidates(dist)
    us = iu.tolist()
    vs = iv.tolist()
    banned = bytearray(len(us))
    edges = []
    for level in range(1, k + 1):
        for pos in _spanning_pass(us, vs, n, banned, level):
            edges.append((us[pos], vs[pos]))
    return SimilarityGraph(np.array(edges, dtype=np.int64), n, k=k)


def graph_weight(graph: SimilarityGraph, dist: DistanceMatrix) -> float:
    """Total weight of the graph's edges under the given distances."""
    if graph.n_edges == 0:
        return 0.0
    return float(dist.dist[graph.edges[:, 0], graph.edges[:, 1]].sum())

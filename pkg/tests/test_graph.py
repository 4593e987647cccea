import numpy as np
import pytest

from pairedgraph import (
    DisconnectedError,
    SimilarityGraph,
    ValidationError,
    build_kmst,
    build_mst,
    distance_matrix,
    graph_weight,
    precomputed_distance,
)

from oracles import min_spanning_weight


def test_euclidean_three_four_five():
    d = distance_matrix(np.array([[0.0, 0.0], [3.0, 4.0]]))
    assert d.dist[0, 1] == 5.0
    assert d.dist[1, 0] == 5.0
    assert d.dist[0, 0] == 0.0


def test_identical_rows_distance_zero():
    d = distance_matrix(np.array([[1.5, -2.0], [1.5, -2.0]]))
    assert d.dist[0, 1] == 0.0


def test_distance_matches_double_loop_oracle():
    rng = np.random.default_rng(3)
    points = rng.standard_normal((6, 3))
    for metric, norm in (("euclidean", 2), ("manhattan", 1)):
        got = distance_matrix(points, metric).dist
        for i in range(6):
            for j in range(6):
                diff = points[i] - points[j]
                want = np.sqrt(np.sum(diff**2)) if norm == 2 else np.sum(np.abs(diff))
                assert got[i, j] == pytest.approx(want, abs=1e-12)


def test_unknown_metric_rejected():
    with pytest.raises(ValidationError, match="metric"):
        distance_matrix(np.zeros((2, 2)), "chebyshev")


def test_precomputed_validation():
    bad = np.array([[0.0, 1.0], [2.0, 0.0]])
    with pytest.raises(ValidationError, match="symmetric"):
        precomputed_distance(bad)
    with pytest.raises(ValidationError, match="diagonal"):
        precomputed_distance(np.array([[1.0, 2.0], [2.0, 0.0]]))
    with pytest.raises(ValidationError, match="negative"):
        precomputed_distance(np.array([[0.0, -1.0], [-1.0, 0.0]]))


def test_mst_two_nodes():
    d = distance_matrix(np.array([[0.0], [1.0]]))
    tree = build_mst(d)
    assert tree.edges.tolist() == [[0, 1]]


def test_mst_path_on_a_line():
    d = distance_matrix(np.array([[0.0], [1.0], [3.0]]))
    tree = build_mst(d)
    assert tree.edges.tolist() == [[0, 1], [1, 2]]
    assert graph_weight(tree, d) == 3.0


def test_mst_matches_exhaustive_enumeration():
    rng = np.random.default_rng(11)
    for trial in range(8):
        points = rng.standard_normal((6, 3))
        d = distance_matrix(points)
        tree = build_mst(d)
        assert tree.n_edges == 5
        assert graph_weight(tree, d) == pytest.approx(
            min_spanning_weight(d.dist), abs=1e-10
        )


def test_kmst_k1_equals_mst():
    rng = np.random.default_rng(5)
    d = distance_matrix(rng.standard_normal((8, 2)))
    assert np.array_equal(build_kmst(d, 1).edges, build_mst(d).edges)


def test_kmst_k2_on_k4_is_the_complete_graph():
    rng = np.random.default_rng(9)
    d = distance_matrix(rng.standard_normal((4, 2)))
    graph = build_kmst(d, 2)
    assert graph.n_edges == 6
    assert graph.edges.tolist() == [[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]]


def test_kmst_edge_count_at_report_scale():
    # 5-MST on 120 pooled nodes carries exactly 5 * 119 = 595 edges
    rng = np.random.default_rng(1)
    d = distance_matrix(rng.standard_normal((120, 10)))
    graph = build_kmst(d, 5)
    assert graph.n_edges == 595
    assert graph.k == 5


def test_kmst_levels_are_edge_disjoint():
    rng = np.random.default_rng(2)
    d = distance_matrix(rng.standard_normal((20, 3)))
    graph = build_kmst(d, 4)
    keys = graph.edges[:, 0] * 20 + graph.edges[:, 1]
    assert np.unique(keys).size == graph.n_edges == 4 * 19


def test_kmst_k_too_large_rejected():
    d = distance_matrix(np.random.default_rng(0).standard_normal((6, 2)))
    with pytest.raises(ValidationError, match="floor"):
        build_kmst(d, 4)
    with pytest.raises(ValidationError):
        build_kmst(d, 0)


def test_excluded_edges_respected():
    d = distance_matrix(np.array([[0.0], [1.0], [3.0]]))
    tree = build_mst(d, excluded=[(0, 1)])
    assert tree.edges.tolist() == [[0, 2], [1, 2]]


def test_disconnection_reports_level():
    # A star MST at level 1 empties the hub, so level 2 cannot span.
    center = np.zeros((1, 2))
    ring = np.array([[np.cos(t), np.sin(t)] for t in np.linspace(0, 5, 3)])
    d = distance_matrix(np.vstack([center, ring]))
    with pytest.raises(DisconnectedError) as err:
        build_kmst(d, 2)
    assert err.value.level == 2


def test_row_permutation_invariance():
    rng = np.random.default_rng(21)
    points = rng.standard_normal((10, 4))
    d = distance_matrix(points)
    base = build_mst(d)
    perm = rng.permutation(10)
    permuted = build_mst(distance_matrix(points[perm]))
    # map edges back through the permutation
    mapped = perm[permuted.edges]
    mapped = np.sort(mapped, axis=1)
    mapped = mapped[np.lexsort((mapped[:, 1], mapped[:, 0]))]
    assert graph_weight(base, d) == pytest.approx(
        graph_weight(permuted, distance_matrix(points[perm])), rel=1e-12
    )
    # distances are almost surely distinct, so the edge sets agree too
    assert np.array_equal(mapped, base.edges)


def test_tie_break_is_lexicographic():
    # four identical points: every distance ties at zero, so the tree is
    # decided purely by (weight, u, v) ordering: a star at node 0
    d = distance_matrix(np.zeros((4, 3)))
    tree = build_mst(d)
    assert tree.edges.tolist() == [[0, 1], [0, 2], [0, 3]]
    # the star exhausts node 0, so a second level cannot span
    with pytest.raises(DisconnectedError) as err:
        build_kmst(d, 2)
    assert err.value.level == 2


def test_similarity_graph_rejects_junk():
    with pytest.raises(ValidationError, match="self-loop"):
        SimilarityGraph(np.array([[1, 1]]), 4)
    with pytest.raises(ValidationError, match="duplicate"):
        SimilarityGraph(np.array([[0, 1], [1, 0]]), 4)
    with pytest.raises(ValidationError, match="range"):
        SimilarityGraph(np.array([[0, 9]]), 4)

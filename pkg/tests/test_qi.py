import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mixgap.ball import extract_rooted_ball
from mixgap.errors import MissingLabels
from mixgap.expander import generate_regular_expander
from mixgap.gluing import build_gn
from mixgap.graph import Graph, cycle_graph, path_graph
from mixgap.qi import (QiMap, apply_edge_label_stretch, apply_quasi_isometry,
                       contract_subdivisions, verify_quasi_isometry)

from oracles import bfs_dist


def _gn(seed=0, r=4):
    h = generate_regular_expander(120, 3, 2 * r + 1, seed=seed, method="tree_graft")
    return build_gn(h, 0, 0, r, depth_min=2, delta=0.1)


def test_vertex_count_grows_by_k_times_l_minus_1():
    g, meta = _gn()
    k = sum(1 for b in meta.balls for _, _, lab in b.tree_edges() if lab == 1)
    for L in (2, 3, 10):
        q, qmap = apply_quasi_isometry(g, list(meta.balls), L)
        assert q.num_vertices == g.num_vertices + k * (L - 1)
        assert len(qmap.subdivided) == k
        assert q.is_connected()
        assert (q.degrees[g.num_vertices:] == 2).all()


def test_labeled_path_0101_becomes_22():
    g = Graph.from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4)],
                         {(0, 1): 0, (1, 2): 1, (2, 3): 0, (3, 4): 1})
    q, _ = apply_edge_label_stretch(g, 10)
    assert q.bfs_distances(0)[4] == 1 + 10 + 1 + 10


def test_ball_route_matches_label_route():
    g, meta = _gn()
    q1, _ = apply_quasi_isometry(g, list(meta.balls), 10)
    q2, _ = apply_edge_label_stretch(g, 10)
    assert q1 == q2


def test_missing_labels():
    g = path_graph(4)
    ball = extract_rooted_ball(g, 0, 2)
    ball.child_label.update({v: -1 for v in ball.child_label})
    with pytest.raises(MissingLabels):
        apply_quasi_isometry(g, [ball], 5)
    with pytest.raises(MissingLabels):
        apply_edge_label_stretch(g, 5)


def test_distance_bounds_by_bfs():
    g, meta = _gn(seed=1)
    q, _ = apply_quasi_isometry(g, list(meta.balls), 10)
    rng = np.random.default_rng(0)
    for s in rng.integers(0, g.num_vertices, 20).tolist():
        d, d2 = bfs_dist(g, s), bfs_dist(q, s)
        for t in rng.integers(0, g.num_vertices, 30).tolist():
            assert d[t] <= d2[t] <= 10 * d[t]


def test_identity_map_no_violations():
    g = cycle_graph(30)
    rep = verify_quasi_isometry(g, g, QiMap(np.arange(30), 1.0, 0.0), 500, seed=1)
    assert rep.violations == 0 and rep.near_surjective
    assert rep.max_ratio == rep.min_ratio == 1.0


def test_uniform_subdivision_scales_exactly():
    L = 4
    g = Graph.from_edges(6, [(i, i + 1) for i in range(5)], {(i, i + 1): 1 for i in range(5)})
    g2, qmap = apply_edge_label_stretch(g, L)
    rep = verify_quasi_isometry(g, g2, QiMap(qmap.forward, float(L), 0.0), 400, seed=0)
    assert rep.violations == 0
    assert rep.max_ratio == rep.min_ratio == L


def test_tight_constants_are_detected():
    g = Graph.from_edges(6, [(i, i + 1) for i in range(5)], {(i, i + 1): 1 for i in range(5)})
    g2, qmap = apply_edge_label_stretch(g, 4)
    rep = verify_quasi_isometry(g, g2, QiMap(qmap.forward, 2.0, 0.0), 400, seed=0)
    assert rep.violations > 0


@settings(max_examples=6, deadline=None)
@given(st.integers(0, 500), st.sampled_from([2, 3, 10]))
def test_verify_zero_violations(seed, stretch):
    g, meta = _gn(seed=seed, r=3)
    q, qmap = apply_quasi_isometry(g, list(meta.balls), stretch)
    rep = verify_quasi_isometry(g, q, qmap, 2000, seed=seed)
    assert rep.violations == 0
    assert rep.near_surjective
    assert rep.max_gap_to_image <= stretch // 2


@settings(max_examples=6, deadline=None)
@given(st.integers(0, 500), st.sampled_from([2, 3, 10]))
def test_contraction_restores_input(seed, stretch):
    g, meta = _gn(seed=seed, r=3)
    q, qmap = apply_quasi_isometry(g, list(meta.balls), stretch)
    back = contract_subdivisions(q, qmap)
    assert sorted(back.degrees.tolist()) == sorted(g.degrees.tolist())
    assert back.edges() == g.edges()

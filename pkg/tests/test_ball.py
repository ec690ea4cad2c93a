import pytest

from mixgap.ball import (VertexSet, best_tree_root, compute_a_set, extract_rooted_ball,
                         word_is_balanced)
from mixgap.errors import BallNotTree
from mixgap.expander import generate_regular_expander
from mixgap.graph import UNLABELED, complete_graph, cycle_graph

from oracles import balanced_words, binary_tree


def test_cycle_ball_is_a_path():
    ball = extract_rooted_ball(cycle_graph(8), 0, 3)
    assert len(ball) == 7
    assert ball.vertices == [0, 1, 2, 3, 5, 6, 7]
    assert ball.boundary == [3, 5]
    assert ball.word[1] == "0" and ball.word[7] == "1"
    assert ball.word[3] == "000" and ball.word[5] == "100"  # lone children get label 0


def test_k4_ball_not_tree():
    with pytest.raises(BallNotTree):
        extract_rooted_ball(complete_graph(4), 0, 2)


def test_boundary_edge_detected():
    # C_6 at radius 3: the two depth-3 walks meet at vertex 3
    with pytest.raises(BallNotTree):
        extract_rooted_ball(cycle_graph(6), 0, 3)
    # C_7 at radius 3: depth-3 vertices 3 and 4 are adjacent, which girth 7 permits
    ball = extract_rooted_ball(cycle_graph(7), 0, 3)
    assert ball.boundary == [3, 4]


def test_girth9_ball_radius4_has_46_vertices():
    g = generate_regular_expander(200, 3, 9, seed=1)
    ball = extract_rooted_ball(g, 17, 4)
    # counted level by level: 1 + 3 + 6 + 12 + 24
    levels = [sum(1 for k in ball.depth.values() if k == i) for i in range(5)]
    assert levels == [1, 3, 6, 12, 24]
    assert len(ball) == 46


def test_labeling_rule_on_cubic_ball():
    g = binary_tree(4)
    ball = extract_rooted_ball(g, 0, 4)
    root_kids = sorted(v for v, p in ball.parent.items() if p == 0)
    assert [ball.child_label[v] for v in root_kids] == [0, 1, UNLABELED]
    third = root_kids[2]
    # the whole third subtree carries no words
    sub = [v for v in ball.depth if v != 0 and _ancestor_at_depth1(ball, v) == third]
    assert all(ball.word[v] is None for v in sub)
    labelled = [w for w in ball.word.values() if w is not None]
    assert len(labelled) == len(set(labelled))
    for v, w in ball.word.items():
        if w is not None:
            assert len(w) == ball.depth[v]
    for v in ball.depth:
        if 0 < ball.depth[v] < 4:
            kids = [c for c, p in ball.parent.items() if p == v]
            assert len(kids) == 2
            assert sorted(ball.child_label[c] for c in kids) == [0, 1]


def _ancestor_at_depth1(ball, v):
    while ball.depth[v] > 1:
        v = ball.parent[v]
    return v


def test_a_set_exact_balance_even_depth():
    ball = extract_rooted_ball(binary_tree(4), 0, 4)
    a = compute_a_set(ball, 1.0, 1.0, depth_min=4)
    words = sorted(ball.word[v] for v in a)
    assert len(a) == 6
    assert words == ["0011", "0101", "0110", "1001", "1010", "1100"]


def test_a_set_odd_depth_is_empty_and_flagged():
    ball = extract_rooted_ball(binary_tree(3), 0, 3)
    a = compute_a_set(ball, 1.0, 1.0, depth_min=3)
    assert a.is_empty and a.empty_flag


def test_a_set_window_matches_enumeration_depth6():
    ball = extract_rooted_ball(binary_tree(6), 0, 6)
    a = compute_a_set(ball, 0.4, 2.5, depth_min=4)

    def pred(w):
        ones = w.count("1")
        return ones > 0 and 0.4 <= (len(w) - ones) / ones <= 2.5

    assert {ball.word[v] for v in a} == balanced_words(4, 6, pred)


def test_delta_window():
    assert word_is_balanced("0001", delta=0.5)        # |3-1| <= 2
    assert not word_is_balanced("0001", delta=0.1)    # |3-1| > 1
    assert word_is_balanced("001", delta=0.1)         # ceil(0.3) = 1
    assert not word_is_balanced("000", delta=5.0)     # no ones


@pytest.mark.parametrize("kwargs", [dict(ratio_lo=1.2, ratio_hi=2.0), dict(ratio_lo=0.5, ratio_hi=0.9),
                                    dict(delta=-1.0), dict()])
def test_a_set_rejects_bad_windows(kwargs):
    ball = extract_rooted_ball(binary_tree(3), 0, 3)
    with pytest.raises(ValueError):
        compute_a_set(ball, depth_min=2, **kwargs)


def test_vertex_set():
    s = VertexSet.of([5, 1, 5, 3], "h")
    assert s.members == (1, 3, 5)
    assert 3 in s and 4 not in s
    assert s.mask(6).tolist() == [False, True, False, True, False, True]
    with pytest.raises(ValueError):
        VertexSet.of([7], num_vertices=5)


def test_best_tree_root_prefers_lowest_id_on_ties():
    v, r = best_tree_root(cycle_graph(9), 6)
    assert (v, r) == (0, 4)

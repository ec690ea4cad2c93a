import pytest
from hypothesis import given, settings, strategies as st

from mixgap.ball import extract_rooted_ball
from mixgap.errors import GenerationFailed, InfeasibleParameters
from mixgap.expander import generate_regular_expander, moore_bound, tree_size
from mixgap.graph import girth
from mixgap.spectral import spectral_gap

from oracles import girth_by_edge_removal


def _check_regular(g, d):
    assert g.is_symmetric()
    assert (g.degrees == d).all()
    assert g.is_connected()


def test_petersen_like_certificate():
    g = generate_regular_expander(10, 3, 5, seed=0, method="swap_repair")
    _check_regular(g, 3)
    assert g.num_vertices == 10
    # exhaustive shortest-cycle search, independent of the package's girth()
    assert girth_by_edge_removal(g) >= 5


def test_k4_is_the_only_cubic_graph_on_four_vertices():
    g = generate_regular_expander(4, 3, 3, seed=0)
    _check_regular(g, 3)
    assert g.num_edges == 6
    assert girth(g, 10) == 3


def test_moore_bound_arithmetic():
    # 1 + 3 * (1 + 2 + 4 + 8 + 16)
    assert moore_bound(3, 11) == 94
    assert moore_bound(3, 5) == 10
    assert moore_bound(3, 6) == 14  # Heawood graph
    assert moore_bound(3, 4) == 6


def test_girth_beyond_moore_bound_fails():
    with pytest.raises(GenerationFailed):
        generate_regular_expander(10, 3, 11, seed=0)


@pytest.mark.parametrize("n, d, g", [(9, 3, 3), (10, 2, 3), (10, 3, 2)])
def test_infeasible_parameters(n, d, g):
    with pytest.raises(InfeasibleParameters):
        generate_regular_expander(n, d, g)


def test_deterministic_given_seed():
    a = generate_regular_expander(60, 3, 5, seed=11)
    b = generate_regular_expander(60, 3, 5, seed=11)
    c = generate_regular_expander(60, 3, 5, seed=12)
    assert a == b
    assert a != c


@settings(max_examples=8, deadline=None)
@given(st.sampled_from([30, 40, 60, 80]), st.integers(0, 1000))
def test_swap_repair_certifies_girth_and_trees(n, seed):
    gmin = 6
    g = generate_regular_expander(n, 3, gmin, seed=seed)
    _check_regular(g, 3)
    assert girth_by_edge_removal(g) >= gmin
    # girth >= 2r + 1 forces tree balls of radius r everywhere
    r = (gmin - 1) // 2
    for v in range(0, n, 7):
        extract_rooted_ball(g, v, r)


@pytest.mark.parametrize("n, r", [(100, 3), (250, 5), (500, 6)])
def test_tree_graft_root_ball_is_tree(n, r):
    g = generate_regular_expander(n, 3, 2 * r + 1, seed=3, method="tree_graft")
    _check_regular(g, 3)
    assert g.num_vertices >= n
    ball = extract_rooted_ball(g, 0, r)
    assert len(ball) == tree_size(3, r)[0]


def test_tree_graft_grows_when_tree_does_not_fit():
    g = generate_regular_expander(50, 3, 9, seed=0, method="tree_graft")
    assert g.num_vertices > 50
    assert len(extract_rooted_ball(g, 0, 4)) == 46


def test_gap_threshold_enforced():
    g = generate_regular_expander(200, 3, 5, seed=2, gap_threshold=0.05)
    assert 2 * spectral_gap(g, 0.5, tol=1e-9).gap >= 0.05
    with pytest.raises(GenerationFailed):
        generate_regular_expander(200, 3, 5, seed=2, gap_threshold=0.5, retries=2)


def test_degree_four():
    g = generate_regular_expander(40, 4, 4, seed=5)
    _check_regular(g, 4)
    assert girth_by_edge_removal(g) >= 4

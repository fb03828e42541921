from fractions import Fraction

import pytest

from cactoid.graph import (BlockShape, BlockTreeError, BlockWeights, ConnectivityError, NotCactoidError,
                           StructuralError, anticlockwise_pair_sum, assemble_graph, canonicalize_block,
                           clockwise_pair_sum, make_block, pair_sum, pair_sum_brute, pair_sums,
                           single_block_graph, unit_block)

F = Fraction


def test_figure_block_summary(figure_block):
    s = figure_block.summary
    assert s.w_c == 3
    assert s.w_hat == (-3, 4)
    assert s.w == (0, 7)
    assert figure_block.cycle_permutation == (0, 1)


def test_cycles_sorted_by_weight():
    block = make_block([1], [([3, 2], 1), ([-1], 0)])
    assert block.summary.w == (0, 7)
    assert block.cycle_permutation == (1, 0)
    assert block.m == (1, 2)
    # user numbering survives in the vertex names
    assert block.local_names() == ["u0", "u1", "v1.2", "v1.1", "v2.1"]
    assert block.user_weights().cycles[0].branch == (F(3), F(2))


def test_sort_is_stable_on_ties():
    block = make_block([1], [([1, 1], 1), ([2], 1)])
    assert block.summary.w == (4, 4)
    assert block.cycle_permutation == (0, 1)


def test_all_zero_weights():
    block = make_block([0, 0], [([0], 0), ([0, 0, 0], 0)])
    s = block.summary
    assert s.w_c == 0 and set(s.w_hat) == {0} and set(s.w) == {0}
    assert pair_sums(block) == (0, (0, 0))


def test_pair_sums_match_brute_force(figure_block):
    w_c2, w2 = pair_sums(figure_block)
    assert w_c2 == 2 * 1
    assert w2 == (pair_sum_brute([-1, -1, -1]), pair_sum_brute([2, 1, 1]))
    assert w2 == (3, 5)


@pytest.mark.parametrize("ws", [[], [4], [1, 2, 3], [F(1, 2), -3, 5, F(2, 3)]])
def test_pair_sum_linear_matches_quadratic(ws):
    ws = [F(x) for x in ws]
    assert pair_sum(ws) == pair_sum_brute(ws)


def test_shape_validation():
    with pytest.raises(StructuralError):
        BlockShape(0, (1,))
    with pytest.raises(StructuralError):
        BlockShape(1, ())
    with pytest.raises(StructuralError):
        BlockShape(1, (0,))
    with pytest.raises(StructuralError):
        canonicalize_block(BlockShape(2, (1,)), BlockWeights.build([1], [([1], 1)]))


def test_index_of_and_bad_names(figure_block):
    assert figure_block.index_of("u2") == 2
    assert figure_block.index_of("v2.1") == 4
    for bad in ("u3", "v3.1", "v1.3", "w1"):
        with pytest.raises(StructuralError):
            figure_block.index_of(bad)


def test_single_block_graph_has_no_cut_vertices():
    g = single_block_graph(unit_block(2, [1, 3]))
    assert set(g.block_index().values()) == {1}
    assert g.cut_vertices() == []
    assert g.n_vertices == 7


def test_two_triangles_share_one_vertex(two_triangles):
    assert two_triangles.n_vertices == 5
    assert two_triangles.block_index()["c"] == 2
    assert two_triangles.cut_vertices() == ["c"]


def test_two_shared_labels_not_cactoid():
    t = unit_block(1, [1])
    with pytest.raises(NotCactoidError):
        assemble_graph([t, t], {(0, "u0"): "a", (0, "u1"): "b", (1, "u0"): "a", (1, "u1"): "b"})


def test_disconnected_blocks_rejected():
    t = unit_block(1, [1])
    with pytest.raises(ConnectivityError):
        assemble_graph([t, t])


def test_cycle_of_blocks_rejected():
    t = unit_block(1, [1])
    glue = {(0, "u1"): "a", (1, "u0"): "a", (1, "u1"): "b", (2, "u0"): "b", (2, "u1"): "c", (0, "u0"): "c"}
    with pytest.raises(BlockTreeError):
        assemble_graph([t, t, t], glue)


def test_duplicate_ids_rejected():
    t = unit_block(1, [1])
    with pytest.raises(StructuralError):
        assemble_graph([t, t], {(0, "u1"): "c", (1, "u0"): "c"}, ["X", "X"])


def test_assembly_is_deterministic():
    t = unit_block(1, [1, 2])
    glue = {(0, "v2.2"): "c", (1, "u0"): "c"}
    g1, g2 = assemble_graph([t, t], glue), assemble_graph([t, t], dict(reversed(list(glue.items()))))
    assert g1 == g2
    assert g1.vertices == g2.vertices


@pytest.mark.parametrize("theta", [[1, 2, 3], [F(1, 2), -1, 4, 0, F(-7, 3)], [5]])
def test_rearrangements_equal_pair_sum(theta):
    theta = [F(x) for x in theta]
    full = pair_sum_brute(theta)
    for s in range(len(theta)):
        assert clockwise_pair_sum(theta, s) == full
        assert anticlockwise_pair_sum(theta, s) == full

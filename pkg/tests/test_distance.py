import random
from fractions import Fraction

import pytest

from cactoid.distance import (OracleDomainError, block_distance_matrix, graph_distance_matrix,
                              restrict_to_block, shortest_path_oracle)
from cactoid.fuzz import random_block, random_graph
from cactoid.graph import make_block, single_block_graph, unit_block
from cactoid.linalg import Matrix

PRINTED_FIGURE = [
    [0, 2, 3, 2, 1, 5, 6],
    [-2, 0, 1, 0, -1, 3, 4],
    [-3, -1, 0, -1, -2, 2, 3],
    [-2, 0, 1, 0, -1, 3, 4],
    [-1, 1, 2, 1, 0, 4, 5],
    [2, 4, 5, 4, 3, 0, 1],
    [1, 3, 4, 3, 2, 6, 0],
]


def rows(m: Matrix):
    return [[int(x) if x.denominator == 1 else x for x in row] for row in m.rows]


def test_figure_matrix_entry_for_entry(figure_block):
    assert rows(block_distance_matrix(figure_block)) == PRINTED_FIGURE


def test_unit_triangle():
    assert rows(block_distance_matrix(unit_block(1, [1]))) == [[0, 1, 2], [2, 0, 1], [1, 2, 0]]


def test_unit_two_triangles_on_an_edge():
    expected = [[0, 1, 2, 2], [2, 0, 1, 1], [1, 2, 0, 3], [1, 2, 3, 0]]
    block = unit_block(1, [1, 1])
    assert rows(block_distance_matrix(block)) == expected
    assert rows(shortest_path_oracle(block)) == expected


def test_zero_weights_give_zero_matrix():
    block = make_block([0, 0, 0], [([0, 0], 0), ([0], 0)])
    assert block_distance_matrix(block).same_values(Matrix.zeros(7, 7))


def test_labels_follow_local_names(figure_block):
    d = block_distance_matrix(figure_block)
    assert list(d.row_labels) == figure_block.local_names()


def test_single_block_graph_matches_block(figure_block):
    g = single_block_graph(figure_block)
    assert graph_distance_matrix(g).same_values(block_distance_matrix(figure_block))


def test_glued_distances_add_through_cut_vertex(two_triangles):
    d = graph_distance_matrix(two_triangles)
    idx = {v: i for i, v in enumerate(d.row_labels)}
    # T1:u0 -> c is 1, c -> T2:u1 is 1
    assert d[idx["T1:u0"], idx["T2:u1"]] == 2
    assert d[idx["T2:u1"], idx["T1:u0"]] == 2 + 2
    for t in range(2):
        assert restrict_to_block(two_triangles, d, t).same_values(block_distance_matrix(two_triangles.blocks[t]))


def test_oracle_refuses_nonpositive_weights(figure_block):
    with pytest.raises(OracleDomainError):
        shortest_path_oracle(figure_block)
    with pytest.raises(OracleDomainError):
        shortest_path_oracle(make_block([1], [([0], 1)]))


@pytest.mark.parametrize("seed", range(40))
def test_table_matches_floyd_warshall_on_positive_blocks(seed):
    rng = random.Random(seed)
    block = random_block(rng, positive=True)
    assert block_distance_matrix(block).same_values(shortest_path_oracle(block))


@pytest.mark.parametrize("seed", range(20))
def test_graph_table_matches_floyd_warshall(seed):
    g = random_graph(random.Random(seed), positive=True)
    assert graph_distance_matrix(g).same_values(shortest_path_oracle(g))


def test_diagonal_zero_and_cycle_sums(figure_block):
    # d(x, y) + d(y, x) is the weight of the cycle through both when they share one
    d = block_distance_matrix(figure_block)
    assert all(d[i, i] == 0 for i in range(d.n_rows))
    assert d[0, 5] + d[5, 0] == Fraction(7)

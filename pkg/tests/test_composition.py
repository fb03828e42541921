import random
from fractions import Fraction
from itertools import product

import pytest

from cactoid.composition import (CompositionError, compose_bags, composition_input, graph_cof, graph_det,
                                 graph_inverse, graph_lambda, make_graph_bag)
from cactoid.distance import graph_distance_matrix
from cactoid.formulas import ZeroCycleWeightError, block_inverse, make_block_bag, verify_left_lapexp, verify_right_lapexp
from cactoid.fuzz import random_graph
from cactoid.graph import assemble_graph, make_block, single_block_graph, unit_block
from cactoid.linalg import Matrix, SingularMatrixError, cofactor_sum, det, inverse

F = Fraction


def test_single_block_composition_is_identity():
    block = make_block([1, 2], [([1], 1), ([2, -1], 3)])
    g = single_block_graph(block)
    bag, composed = make_block_bag(block), make_graph_bag(g)
    assert composed.lambda_ == bag.lambda_
    assert composed.alpha.same_values(bag.alpha)
    assert composed.beta.same_values(bag.beta)
    assert composed.laplacian_like.same_values(bag.laplacian_like)
    assert graph_inverse(g).same_values(block_inverse(block))


def test_two_triangles(two_triangles):
    d = graph_distance_matrix(two_triangles)
    assert graph_cof(two_triangles) == 81 == cofactor_sum(d)
    assert graph_det(two_triangles) == 162 == det(d)
    bag = make_graph_bag(two_triangles)
    assert bag.lambda_ == 2
    assert bag.alpha.column_values() == [F(1, 3), F(-1, 3), F(1, 3), F(1, 3), F(1, 3)]
    assert verify_left_lapexp(bag).passed and verify_right_lapexp(bag).passed
    inv = graph_inverse(two_triangles)
    assert (inv @ d).same_values(Matrix.identity(5))
    assert inv.same_values(inverse(d))


@pytest.mark.parametrize("seed", range(25))
def test_random_graphs_match_oracles(seed):
    g = random_graph(random.Random(seed))
    d = graph_distance_matrix(g)
    assert graph_cof(g) == cofactor_sum(d)
    assert graph_det(g) == det(d)
    lam = graph_lambda(g)
    assert graph_det(g) == lam * graph_cof(g)
    if lam != 0:
        assert graph_inverse(g).same_values(inverse(d))


def test_composed_lambda_zero_is_singular():
    # search small triangle weights until the glued pair has lambda 0
    unit = unit_block(1, [1])
    found = None
    for a, b, c in product(range(-2, 3), repeat=3):
        tri = make_block([a], [([b], c)])
        if any(w == 0 for w in tri.summary.w):
            continue
        g = assemble_graph([unit, tri], {(0, "u1"): "c", (1, "u0"): "c"})
        if graph_lambda(g) == 0:
            found = g
            break
    assert found is not None
    assert det(graph_distance_matrix(found)) == 0
    with pytest.raises(SingularMatrixError):
        graph_inverse(found)


def test_zero_cycle_inverse_names_block(figure_block):
    g = assemble_graph([unit_block(1, [1]), figure_block], {(0, "u0"): "c", (1, "u2"): "c"}, ["T", "F"])
    with pytest.raises(ZeroCycleWeightError, match="block F: cycle 1"):
        graph_inverse(g)
    # determinant still composes through the vanishing block
    assert graph_det(g) == det(graph_distance_matrix(g)) == 0


def test_wrong_bag_count_rejected(two_triangles):
    data = composition_input(two_triangles, [make_block_bag(two_triangles.blocks[0])])
    with pytest.raises(CompositionError):
        compose_bags(data)


def test_mismatched_bag_rejected(two_triangles):
    other = make_block_bag(make_block([2], [([1], 1)]))
    data = composition_input(two_triangles, [other, make_block_bag(two_triangles.blocks[1])])
    with pytest.raises(CompositionError):
        compose_bags(data)

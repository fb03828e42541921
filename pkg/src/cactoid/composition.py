"""Whole-graph bags, determinants, cofactor sums and inverses from per-block data."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import prod
from typing import Sequence

from .distance import graph_distance_matrix, restrict_to_block
from .formulas import (Bag, LapExpReport, ZeroCycleWeightError, block_cof, block_det,
                       make_block_bag, verify_left_lapexp)
from .graph import CactoidGraph, StructuralError
from .linalg import Matrix


class CompositionError(StructuralError):
    """Block bags do not line up with the graph, or one of them fails verification."""

    def __init__(self, message: str, report: LapExpReport | None = None):
        super().__init__(message)
        self.report = report


@dataclass(frozen=True)
class CompositionInput:
    graph: CactoidGraph
    block_bags: tuple[Bag, ...]
    D: Matrix

    @property
    def embeddings(self) -> tuple[tuple[int, ...], ...]:
        return self.graph.embeddings


def composition_input(graph: CactoidGraph, block_bags: Sequence[Bag] | None = None) -> CompositionInput:
    """Pair a graph with bags for its blocks (built from the blocks when not given)."""
    if block_bags is None:
        block_bags = [make_block_bag(b) for b in graph.blocks]
    return CompositionInput(graph, tuple(block_bags), graph_distance_matrix(graph))


def compose_bags(data: CompositionInput, *, verify: bool = True) -> Bag:
    """Sum lambdas, sum zero-extended Laplacian-like blocks, and subtract
    ``bi(v) - 1`` from the summed alpha/beta entries at every vertex."""
    graph, D = data.graph, data.D
    if len(data.block_bags) != len(graph.blocks):
        raise CompositionError(f"{len(data.block_bags)} bags for {len(graph.blocks)} blocks")
    size = graph.n_vertices
    for t, (bag, emb) in enumerate(zip(data.block_bags, graph.embeddings)):
        if bag.size != len(emb):
            raise CompositionError(f"bag {t} has size {bag.size}, block has {len(emb)} vertices")
        sub = restrict_to_block(graph, D, t)
        if not sub.same_values(bag.D):
            raise CompositionError(f"bag {t} distance matrix differs from sub(D) on block {graph.block_ids[t]}")
        if verify:
            report = verify_left_lapexp(bag)
            if not report.passed:
                raise CompositionError(f"bag {t} is not a left LapExp bag", report)

    lam = sum((bag.lambda_ for bag in data.block_bags), Fraction(0))
    alpha = [Fraction(0)] * size
    beta = [Fraction(0)] * size
    lap = [[Fraction(0)] * size for _ in range(size)]
    membership = [0] * size
    for bag, emb in zip(data.block_bags, graph.embeddings):
        a, b = bag.alpha.column_values(), bag.beta.column_values()
        for local, g in enumerate(emb):
            alpha[g] += a[local]
            beta[g] += b[local]
            membership[g] += 1
            row = bag.laplacian_like.rows[local]
            target = lap[g]
            for other, h in enumerate(emb):
                target[h] += row[other]
    for g, bi in enumerate(membership):
        alpha[g] -= bi - 1
        beta[g] -= bi - 1
    labels = graph.vertices
    return Bag(
        D=D,
        lambda_=lam,
        alpha=Matrix.column(alpha, labels),
        beta=Matrix.column(beta, labels),
        laplacian_like=Matrix(tuple(map(tuple, lap)), labels, labels, n_cols=size),
    )


def graph_cof(graph: CactoidGraph) -> Fraction:
    return prod((block_cof(b) for b in graph.blocks), start=Fraction(1))


def graph_det(graph: CactoidGraph) -> Fraction:
    """``sum_i det D_i prod_{j != i} cof D_j``; valid even when some cofactor vanishes."""
    dets = [block_det(b) for b in graph.blocks]
    cofs = [block_cof(b) for b in graph.blocks]
    total = Fraction(0)
    for i, d in enumerate(dets):
        if d:
            total += d * prod((c for j, c in enumerate(cofs) if j != i), start=Fraction(1))
    return total


def graph_lambda(graph: CactoidGraph) -> Fraction:
    return sum((make_block_bag(b).lambda_ for b in graph.blocks), Fraction(0))


def make_graph_bag(graph: CactoidGraph) -> Bag:
    return compose_bags(composition_input(graph))


def graph_inverse(graph: CactoidGraph) -> Matrix:
    """``-L + (1/lambda) beta alpha^T`` from the composed bag.

    Raises :class:`ZeroCycleWeightError` when a block has a zero-weight cycle
    and :class:`SingularMatrixError` when the composed lambda vanishes.
    """
    for block_id, block in zip(graph.block_ids, graph.blocks):
        for k, w in enumerate(block.summary.w):
            if w == 0:
                user = block.cycle_permutation[k] + 1
                raise ZeroCycleWeightError(f"block {block_id}: cycle {user} has total weight 0", cycle=user)
    return make_graph_bag(graph).inverse()

"""Generalized distance matrices of blocks and cactoid graphs, plus a shortest-path oracle."""

from __future__ import annotations

from fractions import Fraction
from itertools import accumulate

import networkx as nx

from .graph import CactoidGraph, WeightedBlock
from .linalg import Matrix


class OracleDomainError(ValueError):
    """The shortest-path oracle only agrees with the table when every weight is positive."""


def _prefix(weights) -> list[Fraction]:
    return [Fraction(0), *accumulate(weights)]


def block_distance_matrix(block: WeightedBlock) -> Matrix:
    """Closed-form distance table of a canonical block, rows/cols in local-name order."""
    n, m = block.n, block.m
    s = block.summary
    w1 = s.w[0]
    path = _prefix(block.weights.path)
    branch = [_prefix(c.branch) for c in block.weights.cycles]

    # (cycle, position) for every vertex; cycle -1 marks the common path
    where = [(-1, p) for p in range(n + 1)]
    for j, mj in enumerate(m):
        where.extend((j, q) for q in range(1, mj + 1))

    def d(x, y) -> Fraction:
        (jx, px), (jy, py) = x, y
        if jx == -1 and jy == -1:
            if px == py:
                return Fraction(0)
            if px < py:
                return path[py] - path[px]
            return w1 - (path[px] - path[py])
        if jx == -1:
            return (s.w_c - path[px]) + branch[jy][py]
        if jy == -1:
            return (s.w_hat[jx] - branch[jx][px]) + path[py]
        if jx == jy:
            if px == py:
                return Fraction(0)
            if px < py:
                return branch[jx][py] - branch[jx][px]
            return s.w[jx] - (branch[jx][px] - branch[jx][py])
        return s.w[jx] - branch[jx][px] + branch[jy][py]

    rows = tuple(tuple(d(x, y) for y in where) for x in where)
    names = tuple(block.local_names())
    return Matrix(rows, names, names)


def graph_distance_matrix(graph: CactoidGraph) -> Matrix:
    """Distances through cut vertices add up along the unique chain of blocks."""
    block_mats = [block_distance_matrix(b).rows for b in graph.blocks]
    # vertex -> [(block, local index)]
    owners: list[list[tuple[int, int]]] = [[] for _ in graph.vertices]
    for t, emb in enumerate(graph.embeddings):
        for local, g in enumerate(emb):
            owners[g].append((t, local))

    size = graph.n_vertices
    rows = []
    for src in range(size):
        dist: list[Fraction | None] = [None] * size
        dist[src] = Fraction(0)
        stack = [(src, None)]
        while stack:
            g, via_block = stack.pop()
            for t, local in owners[g]:
                if t == via_block:
                    continue
                drow = block_mats[t][local]
                for other_local, h in enumerate(graph.embeddings[t]):
                    if h == g:
                        continue
                    dist[h] = dist[g] + drow[other_local]
                    stack.append((h, t))
        rows.append(tuple(dist))
    labels = graph.vertices
    return Matrix(tuple(rows), labels, labels)


def shortest_path_oracle(graph: CactoidGraph | WeightedBlock) -> Matrix:
    """All-pairs minimum directed path weight (Floyd-Warshall). Positive weights only."""
    if isinstance(graph, WeightedBlock):
        edges, labels = graph.edges(), tuple(graph.local_names())
    else:
        edges, labels = graph.edges(), graph.vertices
    bad = [w for _, _, w in edges if w <= 0]
    if bad:
        raise OracleDomainError(f"non-positive edge weight {bad[0]} present; the table is not a metric here")
    dg = nx.DiGraph()
    dg.add_nodes_from(range(len(labels)))
    dg.add_weighted_edges_from(edges)
    fw = nx.floyd_warshall(dg)
    rows = tuple(tuple(Fraction(fw[i][j]) for j in range(len(labels))) for i in range(len(labels)))
    return Matrix(rows, labels, labels)


def restrict_to_block(graph: CactoidGraph, dmat: Matrix, t: int) -> Matrix:
    """``sub(D; G, G_t)`` re-labelled with the block's local names."""
    emb = list(graph.embeddings[t])
    names = graph.blocks[t].local_names()
    return dmat.submatrix(emb, emb).with_labels(names)

"""Weighted blocks dC(n; m_1..m_r) and cactoid-type digraphs glued from them.

A block is a common directed path ``u0 -> u1 -> ... -> u{n}`` plus ``r``
branches ``u{n} -> v1.j -> ... -> v{m_j}.j -> u0``. The edge entering ``u{i}``
carries ``path[i-1]``, the edge entering ``v{i}.j`` carries ``branch[i-1]`` and
the closing edge ``v{m_j}.j -> u0`` carries the cycle's ``closing`` weight.

Blocks are stored with their cycles sorted by total weight (lightest first),
because the distance table routes every backward trip along the common path
through the lightest cycle. Local vertex names keep the *user's* cycle
numbering, so ``v2.1`` always means the second branch vertex of the first
cycle the user wrote down, wherever canonicalization moved that cycle.
"""

from __future__ import annotations

import re
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Mapping, Sequence

import networkx as nx

from .linalg import to_rational


class StructuralError(ValueError):
    """Shape and weight data disagree, or a gluing key is malformed."""


class NotCactoidError(StructuralError):
    """Two blocks share more than one vertex."""


class ConnectivityError(StructuralError):
    """The glued blocks do not form a connected graph."""


class BlockTreeError(StructuralError):
    """The blocks are connected but their intersection pattern has a cycle."""


_LOCAL_RE = re.compile(r"^(?:u(\d+)|v(\d+)\.(\d+))$")


@dataclass(frozen=True)
class BlockShape:
    n: int
    m: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "m", tuple(self.m))
        if self.n < 1:
            raise StructuralError(f"common path length must be >= 1, got {self.n}")
        if not self.m:
            raise StructuralError("a block needs at least one cycle")
        if any(mj < 1 for mj in self.m):
            raise StructuralError(f"every branch needs >= 1 vertex, got {list(self.m)}")

    @property
    def r(self) -> int:
        return len(self.m)

    @property
    def n_vertices(self) -> int:
        return self.n + 1 + sum(self.m)


@dataclass(frozen=True)
class CycleWeights:
    """Branch weights ``[W_1^(j) .. W_{m_j}^(j)]`` and the closing weight ``W_0^(j)``."""

    branch: tuple[Fraction, ...]
    closing: Fraction

    def __post_init__(self):
        object.__setattr__(self, "branch", tuple(to_rational(x) for x in self.branch))
        object.__setattr__(self, "closing", to_rational(self.closing))

    @property
    def total(self) -> Fraction:
        """Branch weight including the closing edge."""
        return sum(self.branch, Fraction(0)) + self.closing

    def edge_weights(self) -> list[Fraction]:
        """Weights of the m_j + 1 edges from u_n back to u_0, in order."""
        return [*self.branch, self.closing]


@dataclass(frozen=True)
class BlockWeights:
    path: tuple[Fraction, ...]
    cycles: tuple[CycleWeights, ...]

    def __post_init__(self):
        object.__setattr__(self, "path", tuple(to_rational(x) for x in self.path))
        object.__setattr__(self, "cycles", tuple(self.cycles))

    @classmethod
    def build(cls, path: Sequence, cycles: Sequence[tuple[Sequence, object]]) -> "BlockWeights":
        """Convenience constructor from ``(branch_weights, closing_weight)`` pairs."""
        return cls(tuple(path), tuple(CycleWeights(tuple(b), c) for b, c in cycles))

    def shape(self) -> BlockShape:
        return BlockShape(len(self.path), tuple(len(c.branch) for c in self.cycles))


@dataclass(frozen=True)
class CycleSummary:
    w_c: Fraction
    w_hat: tuple[Fraction, ...]
    w: tuple[Fraction, ...]
    w_c2: Fraction
    w2: tuple[Fraction, ...]


def pair_sum(weights: Sequence[Fraction]) -> Fraction:
    """Sum of ``a_s * a_t`` over all index pairs ``s < t``."""
    total = Fraction(0)
    running = Fraction(0)
    for x in weights:
        total += running * x
        running += x
    return total


def pair_sum_brute(weights: Sequence[Fraction]) -> Fraction:
    return sum((a * b for a, b in combinations(weights, 2)), Fraction(0))


def summarize(weights: BlockWeights) -> CycleSummary:
    w_c = sum(weights.path, Fraction(0))
    w_hat = tuple(c.total for c in weights.cycles)
    return CycleSummary(
        w_c=w_c,
        w_hat=w_hat,
        w=tuple(w_c + h for h in w_hat),
        w_c2=pair_sum(weights.path),
        w2=tuple(pair_sum(c.edge_weights()) for c in weights.cycles),
    )


@dataclass(frozen=True)
class WeightedBlock:
    """A canonical weighted block; ``cycle_permutation[k]`` is the user index of cycle ``k``."""

    shape: BlockShape
    weights: BlockWeights
    summary: CycleSummary
    cycle_permutation: tuple[int, ...]

    @property
    def n(self) -> int:
        return self.shape.n

    @property
    def m(self) -> tuple[int, ...]:
        return self.shape.m

    @property
    def r(self) -> int:
        return self.shape.r

    @property
    def n_vertices(self) -> int:
        return self.shape.n_vertices

    def local_names(self) -> list[str]:
        """Vertex names in matrix order: u0..u{n}, then each canonical cycle's branch."""
        names = [f"u{i}" for i in range(self.n + 1)]
        for k, mk in enumerate(self.m):
            j = self.cycle_permutation[k] + 1
            names.extend(f"v{i}.{j}" for i in range(1, mk + 1))
        return names

    def index_of(self, name: str) -> int:
        """Matrix index of a local vertex name (user cycle numbering)."""
        match = _LOCAL_RE.match(name)
        if not match:
            raise StructuralError(f"malformed local vertex name {name!r}")
        if match.group(1) is not None:
            i = int(match.group(1))
            if i > self.n:
                raise StructuralError(f"{name!r}: path has only u0..u{self.n}")
            return i
        i, j = int(match.group(2)), int(match.group(3))
        if not 1 <= j <= self.r:
            raise StructuralError(f"{name!r}: block has cycles 1..{self.r}")
        k = self.cycle_permutation.index(j - 1)
        if not 1 <= i <= self.m[k]:
            raise StructuralError(f"{name!r}: cycle {j} has branch vertices 1..{self.m[k]}")
        return self.n + sum(self.m[:k]) + i

    def cycle_of(self, index: int) -> int:
        """Canonical cycle index owning a branch vertex (``-1`` for path vertices)."""
        if index <= self.n:
            return -1
        offset = index - self.n - 1
        for k, mk in enumerate(self.m):
            if offset < mk:
                return k
            offset -= mk
        raise IndexError(index)

    def edges(self) -> list[tuple[int, int, Fraction]]:
        """Directed edges ``(tail, head, weight)`` on matrix indices."""
        n = self.n
        out = [(i - 1, i, self.weights.path[i - 1]) for i in range(1, n + 1)]
        start = n + 1
        for k, cyc in enumerate(self.weights.cycles):
            verts = [n] + list(range(start, start + self.m[k])) + [0]
            out.extend((a, b, w) for a, b, w in zip(verts, verts[1:], cyc.edge_weights()))
            start += self.m[k]
        return out

    def user_weights(self) -> BlockWeights:
        """Weights with the cycles back in the order the user supplied them."""
        cycles = [None] * self.r
        for k, j in enumerate(self.cycle_permutation):
            cycles[j] = self.weights.cycles[k]
        return BlockWeights(self.weights.path, tuple(cycles))

    def cycle_edge_weights(self, k: int) -> list[Fraction]:
        """Weights around canonical cycle ``k`` starting with the edge into ``u1``."""
        return [*self.weights.path, *self.weights.cycles[k].edge_weights()]


def canonicalize_block(shape: BlockShape | None, weights: BlockWeights) -> WeightedBlock:
    """Sort cycles by total weight (stable) and attach the weight summaries."""
    if shape is None:
        shape = weights.shape()
    if len(weights.path) != shape.n:
        raise StructuralError(f"{len(weights.path)} path weights for a path of length {shape.n}")
    if len(weights.cycles) != shape.r:
        raise StructuralError(f"{len(weights.cycles)} cycle weight lists for {shape.r} cycles")
    for j, (cyc, mj) in enumerate(zip(weights.cycles, shape.m), 1):
        if len(cyc.branch) != mj:
            raise StructuralError(f"cycle {j}: {len(cyc.branch)} branch weights, expected {mj}")
    raw = summarize(weights)
    perm = tuple(sorted(range(shape.r), key=lambda j: raw.w[j]))
    sorted_weights = BlockWeights(weights.path, tuple(weights.cycles[j] for j in perm))
    sorted_shape = BlockShape(shape.n, tuple(shape.m[j] for j in perm))
    return WeightedBlock(sorted_shape, sorted_weights, summarize(sorted_weights), perm)


def make_block(path: Sequence, cycles: Sequence[tuple[Sequence, object]]) -> WeightedBlock:
    """Shorthand: ``make_block([2, 1], [([-1, -1], -1), ([2, 1], 1)])``."""
    return canonicalize_block(None, BlockWeights.build(path, cycles))


def unit_block(n: int, m: Sequence[int]) -> WeightedBlock:
    return make_block([1] * n, [([1] * mj, 1) for mj in m])


def pair_sums(block: WeightedBlock) -> tuple[Fraction, tuple[Fraction, ...]]:
    return block.summary.w_c2, block.summary.w2


# Rearrangements of a cyclic pair sum. theta[i] is the weight of edge i-1 -> i
# on a directed cycle 0 -> 1 -> ... -> N-1 -> 0.

def _cycle_dist(theta: Sequence[Fraction], a: int, b: int) -> Fraction:
    """Forward distance from vertex a to vertex b around the cycle."""
    size = len(theta)
    steps = (b - a) % size
    return sum((theta[(a + t) % size] for t in range(1, steps + 1)), Fraction(0))


def clockwise_pair_sum(theta: Sequence[Fraction], s: int) -> Fraction:
    """Pair sum accumulated forward from ``theta[s]``: each weight times the distance
    from its head round to vertex ``s - 1``."""
    size = len(theta)
    return sum((theta[i % size] * _cycle_dist(theta, i % size, (s - 1) % size)
                for i in range(s, s + size - 1)), Fraction(0))


def anticlockwise_pair_sum(theta: Sequence[Fraction], s: int) -> Fraction:
    """Pair sum accumulated backward from ``theta[s]``: ``theta[s-i]`` times the
    forward distance from ``s`` to ``s - i - 1``."""
    size = len(theta)
    return sum((theta[(s - i) % size] * _cycle_dist(theta, s, (s - i - 1) % size)
                for i in range(size - 1)), Fraction(0))


@dataclass(frozen=True)
class CactoidGraph:
    """Blocks glued at shared global labels into a tree of blocks."""

    blocks: tuple[WeightedBlock, ...]
    block_ids: tuple[str, ...]
    gluing: tuple[tuple[tuple[int, str], str], ...]
    vertices: tuple[str, ...] = field(compare=False)
    embeddings: tuple[tuple[int, ...], ...] = field(compare=False)

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    def gluing_map(self) -> dict[tuple[int, str], str]:
        return dict(self.gluing)

    def block_index(self) -> dict[str, int]:
        """``bi(v)``: number of blocks containing each global vertex."""
        counts: dict[str, int] = defaultdict(int)
        for emb in self.embeddings:
            for g in emb:
                counts[self.vertices[g]] += 1
        return dict(counts)

    def block_labels(self, t: int) -> list[str]:
        return [self.vertices[g] for g in self.embeddings[t]]

    def cut_vertices(self) -> list[str]:
        return [v for v, c in self.block_index().items() if c > 1]

    def edges(self) -> list[tuple[int, int, Fraction]]:
        """Directed edges on global vertex indices."""
        out = []
        for block, emb in zip(self.blocks, self.embeddings):
            out.extend((emb[a], emb[b], w) for a, b, w in block.edges())
        return out

    def block_cut_tree(self) -> nx.Graph:
        """Bipartite tree on ``("block", t)`` and ``("vertex", g)`` nodes; every vertex included."""
        tree = nx.Graph()
        for t, emb in enumerate(self.embeddings):
            tree.add_node(("block", t))
            for g in emb:
                tree.add_edge(("block", t), ("vertex", g))
        return tree


def assemble_graph(blocks: Sequence[WeightedBlock],
                   gluing: Mapping[tuple[int, str], str] | None = None,
                   block_ids: Sequence[str] | None = None) -> CactoidGraph:
    """Glue canonical blocks along shared global labels.

    ``gluing`` maps ``(block index, local name)`` to a global label; vertices
    that share a label are identified. Unlabelled vertices get the label
    ``"<block id>:<local name>"``.
    """
    blocks = tuple(blocks)
    if not blocks:
        raise StructuralError("a graph needs at least one block")
    gluing = dict(gluing or {})
    ids = tuple(block_ids) if block_ids is not None else tuple(f"B{t + 1}" for t in range(len(blocks)))
    if len(ids) != len(blocks):
        raise StructuralError("one id per block required")
    if len(set(ids)) != len(ids):
        raise StructuralError(f"duplicate block ids in {list(ids)}")

    resolved: dict[tuple[int, int], str] = {}
    for (t, local), label in gluing.items():
        if not 0 <= t < len(blocks):
            raise StructuralError(f"gluing refers to block {t}, graph has {len(blocks)}")
        resolved[(t, blocks[t].index_of(local))] = str(label)

    vertices: list[str] = []
    position: dict[str, int] = {}
    embeddings = []
    for t, block in enumerate(blocks):
        emb = []
        seen_here: set[str] = set()
        for idx, local in enumerate(block.local_names()):
            label = resolved.get((t, idx), f"{ids[t]}:{local}")
            if label in seen_here:
                raise StructuralError(f"block {ids[t]} maps two vertices to label {label!r}")
            seen_here.add(label)
            if label not in position:
                position[label] = len(vertices)
                vertices.append(label)
            emb.append(position[label])
        embeddings.append(tuple(emb))

    members = [set(e) for e in embeddings]
    for s, t in combinations(range(len(blocks)), 2):
        shared = members[s] & members[t]
        if len(shared) > 1:
            names = sorted(vertices[g] for g in shared)
            raise NotCactoidError(f"blocks {ids[s]} and {ids[t]} share {len(shared)} vertices {names}")

    graph = CactoidGraph(
        blocks=blocks,
        block_ids=ids,
        gluing=tuple(sorted(gluing.items())),
        vertices=tuple(vertices),
        embeddings=tuple(embeddings),
    )
    tree = graph.block_cut_tree()
    if not nx.is_connected(tree):
        raise ConnectivityError(f"{nx.number_connected_components(tree)} disconnected pieces")
    if tree.number_of_edges() != tree.number_of_nodes() - 1:
        raise BlockTreeError("blocks meet along a cycle; the block structure is not a tree")
    return graph


def single_block_graph(block: WeightedBlock, block_id: str = "B1") -> CactoidGraph:
    return assemble_graph([block], {}, [block_id])

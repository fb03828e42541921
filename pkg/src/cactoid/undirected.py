"""Unweighted undirected C(n; m_1..m_r): BFS distances and the determinant classifier.

The classifier encodes a closed-form case analysis; the BFS + exact
determinant oracle is the ground truth, and every disagreement is reported
rather than resolved.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

import networkx as nx

from .graph import StructuralError
from .linalg import Matrix, det, format_rational

# largest |V| the determinant oracle accepts by default
ORACLE_MAX_VERTICES = 200


class SizeBoundError(ValueError):
    pass


@dataclass(frozen=True)
class UndirectedShape:
    n: int
    m: tuple[int, ...]

    def __post_init__(self):
        if self.n < 1:
            raise StructuralError(f"common path length must be >= 1, got {self.n}")
        if not self.m or any(x < 1 for x in self.m):
            raise StructuralError(f"need r >= 1 branches of length >= 1, got {list(self.m)}")
        object.__setattr__(self, "m", tuple(sorted(self.m)))

    @property
    def r(self) -> int:
        return len(self.m)

    @property
    def n_vertices(self) -> int:
        return self.n + 1 + sum(self.m)

    def labels(self) -> list[str]:
        names = [f"u{i}" for i in range(self.n + 1)]
        for j, mj in enumerate(self.m, 1):
            names.extend(f"v{i}.{j}" for i in range(1, mj + 1))
        return names

    def __str__(self) -> str:
        return f"C({self.n};{','.join(map(str, self.m))})"


def shape_graph(shape: UndirectedShape) -> nx.Graph:
    g = nx.Graph()
    path = [f"u{i}" for i in range(shape.n + 1)]
    nx.add_path(g, path)
    for j, mj in enumerate(shape.m, 1):
        nx.add_path(g, [path[-1], *(f"v{i}.{j}" for i in range(1, mj + 1)), path[0]])
    return g


def undirected_distance_matrix(shape: UndirectedShape) -> Matrix:
    labels = shape.labels()
    dist = dict(nx.all_pairs_shortest_path_length(shape_graph(shape)))
    rows = tuple(tuple(Fraction(dist[x][y]) for y in labels) for x in labels)
    return Matrix(rows, labels, labels)


def det_oracle(shape: UndirectedShape, max_vertices: int = ORACLE_MAX_VERTICES) -> Fraction:
    if shape.n_vertices > max_vertices:
        raise SizeBoundError(f"{shape} has {shape.n_vertices} vertices, bound is {max_vertices}")
    return det(undirected_distance_matrix(shape))


@dataclass(frozen=True)
class DetVerdict:
    """``kind`` is ``"closed"``, ``"zero"`` or ``"unknown"``.

    ``dependency`` lists ``(vertex, coefficient)`` pairs of the column relation
    the zero proofs exhibit, when the case analysis names one.
    """

    kind: str
    value: Fraction | None
    rule: str
    dependency: tuple[tuple[str, int], ...] | None = None


def _bracket(k: int, r: int) -> int:
    return (-2) ** (r - 1) * (k * (k + 1) - (r - 1) * (3 * k * k - k - 2))


def _closed(value: int, rule: str) -> DetVerdict:
    return DetVerdict("closed", Fraction(value), rule)


def _zero(rule: str, dependency=None) -> DetVerdict:
    return DetVerdict("zero", Fraction(0), rule, tuple(dependency) if dependency else None)


def _odd_at_least_3(m: Sequence[int]) -> list[int]:
    return [j for j, x in enumerate(m, 1) if x >= 3 and x % 2]


def _even(m: Sequence[int]) -> list[int]:
    return [j for j, x in enumerate(m, 1) if x % 2 == 0]


def _v(i: int, j: int) -> str:
    return f"v{i}.{j}"


def classify_det(shape: UndirectedShape) -> DetVerdict:
    """Determinant of D(C(n; m)) as the case analysis states it."""
    n, m, r = shape.n, shape.m, shape.r
    if r == 1:
        length = n + m[0] + 1
        if length % 2 == 0:
            return _zero("r=1")
        k = length // 2
        return _closed(k * (k + 1), "r=1")

    odd3, even = _odd_at_least_3(m), _even(m)

    if n % 2 == 0 and n >= 4:
        k = n // 2
        if odd3:
            s = odd3[0]
            l = (m[s - 1] - 1) // 2
            dep = [(f"u{k - 1}", 1), (f"u{k + 1}", -1), (_v(l, s), 1), (_v(l + 2, s), -1)]
        elif len(even) >= 2:
            s, t = even[0], even[1]
            l, p = m[s - 1] // 2, m[t - 1] // 2
            dep = [(_v(l, s), 1), (_v(l + 1, s), -1), (_v(p, t), -1), (_v(p + 1, t), 1)]
        else:
            dep = [("u0", 1), (f"u{k - 1}", -1), (f"u{k + 1}", 1), (f"u{n}", -1)]
        return _zero("even-n", dep)

    if n % 2 == 1 and n >= 3:
        if all(x == 1 for x in m):
            return _closed(_bracket((n + 1) // 2, r), "odd-n")
        if even:
            k = (n - 1) // 2
            s = even[0]
            l = m[s - 1] // 2
            dep = [(f"u{k}", 1), (f"u{k + 1}", -1), (_v(l, s), 1), (_v(l + 1, s), -1)]
        elif len(odd3) >= 2:
            s, t = odd3[0], odd3[1]
            l, p = (m[s - 1] - 1) // 2, (m[t - 1] - 1) // 2
            dep = [(_v(l, s), 1), (_v(l + 2, s), -1), (_v(p, t), -1), (_v(p + 2, t), 1)]
        else:
            s = odd3[0]
            l = (m[s - 1] - 1) // 2
            dep = [("u0", 1), (f"u{n}", -1), (_v(l, s), 1), (_v(l + 2, s), -1)]
        return _zero("odd-n", dep)

    if n == 2:
        if all(x == 1 for x in m):
            return _closed((-1) ** (r + 1) * 2 ** (r + 2) * (r - 1), "n=2")
        if all(x == 1 for x in m[:-1]) and m[-1] % 2 == 0:
            return _closed(_bracket(m[-1] // 2 + 1, r), "n=2")
        if odd3:
            s = odd3[0]
            l = (m[s - 1] - 1) // 2
            dep = [("u0", 1), ("u2", -1), (_v(l, s), 1), (_v(l + 2, s), -1)]
        else:
            s, t = even[0], even[1]
            l, p = m[s - 1] // 2, m[t - 1] // 2
            dep = [(_v(l, s), 1), (_v(l + 1, s), -1), (_v(p, t), -1), (_v(p + 1, t), 1)]
        return _zero("n=2", dep)

    # n == 1
    if all(x == 1 for x in m):
        return _closed((-1) ** (r - 1) * 2 ** (r - 2), "n=1")
    if even:
        s = even[0]
        l = m[s - 1] // 2
        return _zero("n=1", [("u1", 1), ("u0", -1), (_v(l, s), -1), (_v(l + 1, s), 1)])
    return DetVerdict("unknown", None, "n=1")


def check_dependency(shape: UndirectedShape, verdict: DetVerdict, dmat: Matrix | None = None) -> bool | None:
    """Whether the verdict's column relation holds on the BFS matrix (None if it names none)."""
    if verdict.dependency is None:
        return None
    if dmat is None:
        dmat = undirected_distance_matrix(shape)
    index = {name: i for i, name in enumerate(dmat.col_labels)}
    for row in dmat.rows:
        if sum(c * row[index[name]] for name, c in verdict.dependency) != 0:
            return False
    return True


@dataclass(frozen=True)
class Classification:
    shape: UndirectedShape
    verdict: DetVerdict
    oracle: Fraction | None

    @property
    def agrees(self) -> bool | None:
        if self.oracle is None or self.verdict.kind == "unknown":
            return None
        return self.verdict.value == self.oracle

    def discrepancy(self) -> dict | None:
        """A record naming both values whenever the stated value and the oracle differ."""
        if self.agrees is not False:
            return None
        return {
            "shape": str(self.shape),
            "rule": self.verdict.rule,
            "stated": format_rational(self.verdict.value),
            "oracle": format_rational(self.oracle),
        }

    def to_json(self) -> dict:
        v = self.verdict
        out = {
            "verdict": v.kind,
            "value": None if v.value is None else format_rational(v.value),
            "rule": v.rule,
            "oracle": None if self.oracle is None else format_rational(self.oracle),
            "agrees": self.agrees,
        }
        record = self.discrepancy()
        if record is not None:
            out["discrepancy"] = record
        return out


def classify_with_oracle(shape: UndirectedShape, max_vertices: int = ORACLE_MAX_VERTICES) -> Classification:
    oracle = det_oracle(shape) if shape.n_vertices <= max_vertices else None
    return Classification(shape, classify_det(shape), oracle)


def all_shapes(max_vertices: int) -> Iterator[UndirectedShape]:
    """Every C(n; m_1 <= .. <= m_r) with at most ``max_vertices`` vertices."""

    def partitions(total: int, smallest: int):
        if total == 0:
            yield ()
            return
        for first in range(smallest, total + 1):
            for rest in partitions(total - first, first):
                yield (first, *rest)

    for size in range(3, max_vertices + 1):
        for n in range(1, size - 1):
            for m in partitions(size - n - 1, 1):
                yield UndirectedShape(n, m)


def t_r_discrepancies(r_values: Sequence[int] = (2, 3, 4, 5)) -> list[dict]:
    """Stated vs computed determinant for r triangles sharing one edge."""
    records = []
    for r in r_values:
        c = classify_with_oracle(UndirectedShape(1, (1,) * r))
        record = c.discrepancy()
        if record is not None:
            records.append(record)
    return records


def odd_cycle_inverse(k: int) -> Matrix:
    """``-2I - C^k - C^(k+1) + (2k+1)/(k(k+1)) J`` for the cycle on 2k+1 vertices,
    where ``C`` is the cyclic shift with ``C[i][i+1] = 1``."""
    if k < 1:
        raise ValueError("k must be >= 1")
    size = 2 * k + 1
    c = Fraction(size, k * (k + 1))
    rows = []
    for i in range(size):
        row = []
        for j in range(size):
            x = c - 2 * (i == j)
            if j == (i + k) % size:
                x -= 1
            if j == (i + k + 1) % size:
                x -= 1
            row.append(x)
        rows.append(tuple(row))
    return Matrix(tuple(rows))


def odd_cycle_distance_matrix(k: int) -> Matrix:
    size = 2 * k + 1
    return Matrix(tuple(tuple(min((i - j) % size, (j - i) % size) for j in range(size)) for i in range(size)))

"""Closed forms for a single weighted block: det, cofactor sum, lambda/alpha/beta,
the Laplacian-like matrix and the rank-one inverse ``D^-1 = -L + (1/lambda) beta alpha^T``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import prod

from .distance import block_distance_matrix
from .graph import WeightedBlock
from .linalg import Matrix, SingularMatrixError, format_rational, rank, rank_one


class ZeroCycleWeightError(ArithmeticError):
    """Some cycle has total weight zero, so the block's distance matrix is singular."""

    def __init__(self, message: str, cycle: int | None = None):
        super().__init__(message)
        self.cycle = cycle


def _require_nonzero_cycles(block: WeightedBlock) -> None:
    for k, wk in enumerate(block.summary.w):
        if wk == 0:
            user = block.cycle_permutation[k] + 1
            raise ZeroCycleWeightError(f"cycle {user} has total weight 0", cycle=user)


def block_cof(block: WeightedBlock) -> Fraction:
    """``(-1)^(|V|-1) w_1^n prod_j w_j^(m_j)``."""
    w = block.summary.w
    sign = -1 if (block.n_vertices - 1) % 2 else 1
    return sign * w[0] ** block.n * prod((wj ** mj for wj, mj in zip(w, block.m)), start=Fraction(1))


def block_lambda(block: WeightedBlock) -> Fraction:
    _require_nonzero_cycles(block)
    s = block.summary
    return (s.w_c * s.w_hat[0] + s.w_c2) / s.w[0] + sum((a / b for a, b in zip(s.w2, s.w)), Fraction(0))


def block_det(block: WeightedBlock) -> Fraction:
    """``cof * lambda`` with the cycle weights cleared from the denominators.

    The cleared form is a polynomial in the weights, so it stays exact when
    some ``w_j`` is zero. It vanishes whenever :func:`zero_cycle_forces_zero_det`
    holds; a zero cycle ``j >= 2`` with a single branch vertex can leave a
    nonzero determinant.
    """
    s, n, m = block.summary, block.n, block.m
    w = s.w
    sign = -1 if (block.n_vertices - 1) % 2 else 1

    def others(j: int) -> Fraction:
        return prod((w[l] ** m[l] for l in range(block.r) if l != j), start=Fraction(1))

    total = w[0] ** (n - 1) * w[0] ** m[0] * others(0) * (s.w_c * s.w_hat[0] + s.w_c2)
    for j in range(block.r):
        total += w[0] ** n * w[j] ** (m[j] - 1) * s.w2[j] * others(j)
    return sign * total


def zero_cycle_forces_zero_det(block: WeightedBlock) -> bool:
    """Whether some zero-weight cycle makes the determinant vanish outright:
    ``w_1 = 0``, or ``w_j = 0`` on a cycle with at least two branch vertices."""
    w = block.summary.w
    return w[0] == 0 or any(wk == 0 and mk >= 2 for wk, mk in zip(w, block.m))


def block_alpha(block: WeightedBlock) -> Matrix:
    """Weight of the edge entering each vertex over its cycle's total weight;
    ``u0`` takes the balancing entry."""
    _require_nonzero_cycles(block)
    s, wts = block.summary, block.weights
    head = (sum((c.closing / wj for c, wj in zip(wts.cycles, s.w)), Fraction(0))
            - sum((h / wj for h, wj in zip(s.w_hat[1:], s.w[1:])), Fraction(0)))
    values = [head, *(x / s.w[0] for x in wts.path)]
    for c, wj in zip(wts.cycles, s.w):
        values.extend(x / wj for x in c.branch)
    return Matrix.column(values, block.local_names())


def block_beta(block: WeightedBlock) -> Matrix:
    """Weight of the edge leaving each vertex over its cycle's total weight;
    ``u{n}`` takes the balancing entry."""
    _require_nonzero_cycles(block)
    s, wts = block.summary, block.weights
    tail = (sum((c.branch[0] / wj for c, wj in zip(wts.cycles, s.w)), Fraction(0))
            - sum((h / wj for h, wj in zip(s.w_hat[1:], s.w[1:])), Fraction(0)))
    values = [*(x / s.w[0] for x in wts.path), tail]
    for c, wj in zip(wts.cycles, s.w):
        values.extend(x / wj for x in [*c.branch[1:], c.closing])
    return Matrix.column(values, block.local_names())


def in_adjacency(block: WeightedBlock) -> list[list[Fraction]]:
    """Edge ``x -> y`` gets ``1/w`` of the cycle the edge's head belongs to
    (the lightest cycle along the common path)."""
    _require_nonzero_cycles(block)
    size = block.n_vertices
    w = block.summary.w
    adj = [[Fraction(0)] * size for _ in range(size)]
    for a, b, _ in block.edges():
        k = block.cycle_of(b)
        if k < 0:
            # edges into the path: u_i -> u_{i+1}, or a closing edge into u0
            k = 0 if b != 0 else block.cycle_of(a)
        adj[a][b] += 1 / w[k]
    return adj


def block_laplacian_like(block: WeightedBlock) -> Matrix:
    """``L + L_hat`` with ``L = D_out - A_in`` and ``L_hat`` touching only row ``u{n}``."""
    adj = in_adjacency(block)
    n, size = block.n, block.n_vertices
    lap = [[-x for x in row] for row in adj]
    for i, row in enumerate(adj):
        lap[i][i] += sum(row, Fraction(0))
    extra = sum((1 / wj for wj in block.summary.w[1:]), Fraction(0))
    lap[n][0] += extra
    lap[n][n] -= extra
    names = block.local_names()
    return Matrix(tuple(map(tuple, lap)), names, names, n_cols=size)


@dataclass(frozen=True)
class Bag:
    """``(D, lambda, alpha, beta, L)``; alpha and beta are column matrices."""

    D: Matrix
    lambda_: Fraction
    alpha: Matrix
    beta: Matrix
    laplacian_like: Matrix

    @property
    def size(self) -> int:
        return self.D.n_rows

    def inverse(self) -> Matrix:
        if self.lambda_ == 0:
            found = rank(self.D)
            raise SingularMatrixError(f"lambda = 0, distance matrix is singular (rank {found})", rank=found)
        return -self.laplacian_like + rank_one(self.beta, self.alpha, 1 / self.lambda_)


def make_block_bag(block: WeightedBlock) -> Bag:
    return Bag(
        D=block_distance_matrix(block),
        lambda_=block_lambda(block),
        alpha=block_alpha(block),
        beta=block_beta(block),
        laplacian_like=block_laplacian_like(block),
    )


def block_inverse(block: WeightedBlock) -> Matrix:
    return make_block_bag(block).inverse()


@dataclass(frozen=True)
class Condition:
    name: str
    passed: bool
    first_mismatch: tuple[int, int, Fraction, Fraction] | None = None

    def to_json(self) -> dict:
        mm = None
        if self.first_mismatch is not None:
            i, j, want, got = self.first_mismatch
            mm = {"row": i, "col": j, "expected": format_rational(want), "got": format_rational(got)}
        return {"name": self.name, "status": "pass" if self.passed else "fail", "first_mismatch": mm}


@dataclass(frozen=True)
class LapExpReport:
    side: str
    conditions: tuple[Condition, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.conditions)

    def failures(self) -> list[Condition]:
        return [c for c in self.conditions if not c.passed]


def _check(name: str, got: Matrix, expected: Matrix) -> Condition:
    mm = expected.unlabeled().first_mismatch(got.unlabeled())
    return Condition(name, mm is None, mm)


def _scalar(x) -> Matrix:
    return Matrix(((x,),), n_cols=1)


def verify_left_lapexp(bag: Bag) -> LapExpReport:
    size = bag.size
    one_col, one_row = Matrix.ones(size, 1), Matrix.ones(1, size)
    eye = Matrix.identity(size)
    conds = (
        _check("alpha^T 1 = 1", bag.alpha.T @ one_col, _scalar(1)),
        _check("L 1 = 0", bag.laplacian_like @ one_col, Matrix.zeros(size, 1)),
        _check("alpha^T D = lambda 1^T", bag.alpha.T @ bag.D, one_row.scale(bag.lambda_)),
        _check("L D + I = beta 1^T", bag.laplacian_like @ bag.D + eye, bag.beta @ one_row),
    )
    return LapExpReport("left", conds)


def verify_right_lapexp(bag: Bag) -> LapExpReport:
    size = bag.size
    one_col, one_row = Matrix.ones(size, 1), Matrix.ones(1, size)
    eye = Matrix.identity(size)
    conds = (
        _check("beta^T 1 = 1", bag.beta.T @ one_col, _scalar(1)),
        _check("1^T L = 0", one_row @ bag.laplacian_like, Matrix.zeros(1, size)),
        _check("D beta = lambda 1", bag.D @ bag.beta, one_col.scale(bag.lambda_)),
        _check("D L + I = 1 alpha^T", bag.D @ bag.laplacian_like + eye, one_col @ bag.alpha.T),
    )
    return LapExpReport("right", conds)

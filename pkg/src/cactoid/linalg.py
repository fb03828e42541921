"""Exact rational matrices and the brute-force oracles used to check closed forms.

Scalars are :class:`fractions.Fraction`; nothing in here touches floating point.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import lcm
from operator import mul
from typing import Iterable, Sequence

Rational = Fraction

_RATIONAL_RE = re.compile(r"^-?\d+(/\d+)?$")


class DimensionError(ValueError):
    """Operand shapes do not fit the operation."""


class SingularMatrixError(ArithmeticError):
    """Raised when an inverse is requested for a singular matrix."""

    def __init__(self, message: str, rank: int | None = None):
        super().__init__(message)
        self.rank = rank


class PivotError(ArithmeticError):
    """The leading block of a Schur split is singular."""


def to_rational(value) -> Fraction:
    """Coerce an int, Fraction or canonical ``"p/q"`` string to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if not _RATIONAL_RE.match(text):
            raise ValueError(f"not an integer or p/q rational: {value!r}")
        q = Fraction(text)
        return q
    raise TypeError(f"cannot interpret {type(value).__name__} as an exact rational")


def format_rational(q: Fraction) -> str:
    """Canonical string form: ``"-3"``, ``"1/2"``."""
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class Matrix:
    """Dense matrix of Fractions with optional vertex labels on rows/columns."""

    rows: tuple[tuple[Fraction, ...], ...]
    row_labels: tuple[str, ...] = ()
    col_labels: tuple[str, ...] = ()
    n_cols: int = field(default=-1, compare=False)

    def __post_init__(self):
        rows = tuple(tuple(to_rational(x) for x in row) for row in self.rows)
        width = len(rows[0]) if rows else max(self.n_cols, 0)
        if any(len(row) != width for row in rows):
            raise DimensionError("ragged rows")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "n_cols", width)
        object.__setattr__(self, "row_labels", tuple(self.row_labels))
        object.__setattr__(self, "col_labels", tuple(self.col_labels))
        if self.row_labels and len(self.row_labels) != len(rows):
            raise DimensionError("row label count does not match row count")
        if self.col_labels and len(self.col_labels) != width:
            raise DimensionError("column label count does not match column count")

    # construction helpers

    @classmethod
    def identity(cls, n: int, labels: Sequence[str] = ()) -> "Matrix":
        return cls(tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)),
                   labels, labels, n_cols=n)

    @classmethod
    def zeros(cls, n_rows: int, n_cols: int) -> "Matrix":
        return cls(tuple((Fraction(0),) * n_cols for _ in range(n_rows)), n_cols=n_cols)

    @classmethod
    def ones(cls, n_rows: int, n_cols: int) -> "Matrix":
        return cls(tuple((Fraction(1),) * n_cols for _ in range(n_rows)), n_cols=n_cols)

    @classmethod
    def column(cls, values: Iterable, labels: Sequence[str] = ()) -> "Matrix":
        return cls(tuple((v,) for v in values), labels, n_cols=1)

    # shape and access

    @property
    def n_rows(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.rows), self.n_cols)

    @property
    def is_square(self) -> bool:
        return self.n_rows == self.n_cols

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        return self.rows[i][j]

    def entries(self) -> list[Fraction]:
        """Row-major entry list."""
        return [x for row in self.rows for x in row]

    def column_values(self, j: int = 0) -> list[Fraction]:
        return [row[j] for row in self.rows]

    def with_labels(self, row_labels: Sequence[str], col_labels: Sequence[str] | None = None) -> "Matrix":
        return Matrix(self.rows, tuple(row_labels),
                      tuple(row_labels if col_labels is None else col_labels), n_cols=self.n_cols)

    def unlabeled(self) -> "Matrix":
        return Matrix(self.rows, n_cols=self.n_cols)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Matrix":
        rl = tuple(self.row_labels[i] for i in rows) if self.row_labels else ()
        cl = tuple(self.col_labels[j] for j in cols) if self.col_labels else ()
        return Matrix(tuple(tuple(self.rows[i][j] for j in cols) for i in rows), rl, cl,
                      n_cols=len(cols))

    def minor(self, i: int, j: int) -> "Matrix":
        """The matrix with row ``i`` and column ``j`` deleted."""
        keep_r = [k for k in range(self.n_rows) if k != i]
        keep_c = [k for k in range(self.n_cols) if k != j]
        return self.submatrix(keep_r, keep_c)

    # arithmetic

    @property
    def T(self) -> "Matrix":
        return Matrix(tuple(zip(*self.rows)) if self.rows else (), self.col_labels, self.row_labels,
                      n_cols=self.n_rows)

    def _check_same_shape(self, other: "Matrix"):
        if self.shape != other.shape:
            raise DimensionError(f"shape mismatch {self.shape} vs {other.shape}")

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check_same_shape(other)
        return Matrix(tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)),
                      self.row_labels, self.col_labels, n_cols=self.n_cols)

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check_same_shape(other)
        return Matrix(tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)),
                      self.row_labels, self.col_labels, n_cols=self.n_cols)

    def __neg__(self) -> "Matrix":
        return self.scale(-1)

    def scale(self, c) -> "Matrix":
        c = to_rational(c)
        return Matrix(tuple(tuple(c * a for a in r) for r in self.rows),
                      self.row_labels, self.col_labels, n_cols=self.n_cols)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.n_cols != other.n_rows:
            raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
        # integer dot products over per-row / per-column common denominators
        left = []
        for r in self.rows:
            den = lcm(*(x.denominator for x in r)) if r else 1
            left.append(([x.numerator * (den // x.denominator) for x in r], den))
        right = []
        for c in (zip(*other.rows) if other.rows else [()] * other.n_cols):
            den = lcm(*(x.denominator for x in c)) if c else 1
            right.append(([x.numerator * (den // x.denominator) for x in c], den))
        out = tuple(tuple(Fraction(sum(map(mul, a, b)), da * db) for b, db in right) for a, da in left)
        return Matrix(out, self.row_labels, other.col_labels, n_cols=other.n_cols)

    def same_values(self, other: "Matrix") -> bool:
        """Entry-wise equality, ignoring labels."""
        return self.shape == other.shape and self.rows == other.rows

    def first_mismatch(self, other: "Matrix") -> tuple[int, int, Fraction, Fraction] | None:
        """``(row, col, self_entry, other_entry)`` at the first differing entry, or None."""
        self._check_same_shape(other)
        for i, (r, s) in enumerate(zip(self.rows, other.rows)):
            for j, (a, b) in enumerate(zip(r, s)):
                if a != b:
                    return (i, j, a, b)
        return None

    def __repr__(self) -> str:
        body = "; ".join(" ".join(format_rational(x) for x in r) for r in self.rows)
        return f"Matrix({self.n_rows}x{self.n_cols}: [{body}])"


def _integer_rows(m: Matrix) -> tuple[list[list[int]], int]:
    """Scale each row by the lcm of its denominators.

    Returns the integer rows and the product of the scale factors, so that
    ``det(m) = det(int_rows) / scale``.
    """
    rows = []
    scale = 1
    for row in m.rows:
        mult = lcm(*(x.denominator for x in row)) if row else 1
        rows.append([int(x * mult) for x in row])
        scale *= mult
    return rows, scale


def _bareiss_det(a: list[list[int]]) -> int:
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = a[k][k]
        row_k = a[k]
        for i in range(k + 1, n):
            row_i = a[i]
            f = row_i[k]
            for j in range(k + 1, n):
                row_i[j] = (pivot * row_i[j] - f * row_k[j]) // prev
            row_i[k] = 0
        prev = pivot
    return sign * a[n - 1][n - 1]


def det(m: Matrix) -> Fraction:
    """Exact determinant via fraction-free (Bareiss) elimination."""
    if not m.is_square:
        raise DimensionError(f"determinant of a non-square {m.shape} matrix")
    rows, scale = _integer_rows(m)
    return Fraction(_bareiss_det(rows), scale)


def rank(m: Matrix) -> int:
    """Exact rank by fraction-free row reduction."""
    rows, _ = _integer_rows(m)
    n_rows, n_cols = m.shape
    r = 0
    prev = 1
    for c in range(n_cols):
        piv = next((i for i in range(r, n_rows) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        p = rows[r][c]
        for i in range(r + 1, n_rows):
            f = rows[i][c]
            rows[i] = [(p * x - f * y) // prev for x, y in zip(rows[i], rows[r])]
        prev = p
        r += 1
        if r == n_rows:
            break
    return r


def inverse(m: Matrix) -> Matrix:
    """Exact inverse by fraction-free Gauss-Jordan on ``[A | I]``.

    Labels are swapped: rows of the inverse are indexed by the columns of ``m``.
    """
    if not m.is_square:
        raise DimensionError(f"inverse of a non-square {m.shape} matrix")
    n = m.n_rows
    a, _ = _integer_rows(m)
    # A = diag(s) M with row scales s, hence M^{-1} = A^{-1} diag(s)
    scales = [lcm(*(x.denominator for x in row)) if row else 1 for row in m.rows]
    aug = [row + [int(i == j) for j in range(n)] for i, row in enumerate(a)]
    prev = 1
    for k in range(n):
        piv = next((i for i in range(k, n) if aug[i][k] != 0), None)
        if piv is None:
            found = rank(m)
            raise SingularMatrixError(f"matrix is singular (rank {found} < {n})", rank=found)
        aug[k], aug[piv] = aug[piv], aug[k]
        p = aug[k][k]
        row_k = aug[k]
        for i in range(n):
            if i == k:
                continue
            row_i = aug[i]
            f = row_i[k]
            aug[i] = [(p * x - f * y) // prev for x, y in zip(row_i, row_k)]
        prev = p
    # left half is now prev * I
    d = prev
    out = tuple(tuple(Fraction(aug[i][n + j] * scales[j], d) for j in range(n)) for i in range(n))
    return Matrix(out, m.col_labels, m.row_labels, n_cols=n)


def cofactor_sum(m: Matrix) -> Fraction:
    """Sum of all n^2 cofactors, by the first-row/first-column reduction.

    Subtract row 0 from every other row, then column 0 from every other
    column, drop row and column 0 and take the determinant. A 1x1 matrix has
    the single cofactor ``det([]) = 1``.
    """
    if not m.is_square:
        raise DimensionError(f"cofactor sum of a non-square {m.shape} matrix")
    n = m.n_rows
    if n < 1:
        raise DimensionError("cofactor sum needs at least a 1x1 matrix")
    if n == 1:
        return Fraction(1)
    r0 = m.rows[0]
    rows = [r0] + [tuple(x - y for x, y in zip(row, r0)) for row in m.rows[1:]]
    reduced = tuple(tuple(row[j] - row[0] for j in range(1, n)) for row in rows[1:])
    return det(Matrix(reduced, n_cols=n - 1))


def cofactor_sum_naive(m: Matrix) -> Fraction:
    """Sum of ``(-1)^(i+j) det(M(i|j))`` over every entry. Slow; oracle only."""
    if not m.is_square or m.n_rows < 1:
        raise DimensionError("cofactor sum needs a non-empty square matrix")
    n = m.n_rows
    if n == 1:
        return Fraction(1)
    return sum(((-1) ** (i + j) * det(m.minor(i, j)) for i, j in product(range(n), repeat=2)),
               Fraction(0))


def schur_det(m: Matrix, split: int, *, trailing: bool = False) -> Fraction:
    """Determinant through a Schur complement.

    With the default leading form, ``det M = det B11 * det(B22 - B21 B11^-1 B12)``
    where ``B11`` is the leading ``split x split`` block. ``trailing=True``
    pivots on the trailing block ``B22`` instead.
    """
    if not m.is_square:
        raise DimensionError(f"determinant of a non-square {m.shape} matrix")
    n = m.n_rows
    if not 1 <= split < n:
        raise DimensionError(f"split must lie in [1, {n - 1}], got {split}")
    head, tail = list(range(split)), list(range(split, n))
    b11, b12 = m.submatrix(head, head).unlabeled(), m.submatrix(head, tail).unlabeled()
    b21, b22 = m.submatrix(tail, head).unlabeled(), m.submatrix(tail, tail).unlabeled()
    if trailing:
        b11, b22, b12, b21 = b22, b11, b21, b12
    try:
        b11_inv = inverse(b11)
    except SingularMatrixError as exc:
        which = "trailing" if trailing else "leading"
        raise PivotError(f"{which} block of the split is singular (rank {exc.rank})") from exc
    return det(b11) * det(b22 - b21 @ b11_inv @ b12)


def rank_one(beta: Matrix, alpha: Matrix, scale=1) -> Matrix:
    """``scale * beta alpha^T`` for column matrices ``beta`` and ``alpha``."""
    if beta.n_cols != 1 or alpha.n_cols != 1:
        raise DimensionError("rank_one expects two column matrices")
    if beta.n_rows != alpha.n_rows:
        raise DimensionError(f"length mismatch {beta.n_rows} vs {alpha.n_rows}")
    c = to_rational(scale)
    b, a = beta.column_values(), alpha.column_values()
    return Matrix(tuple(tuple(c * bi * aj for aj in a) for bi in b),
                  beta.row_labels, alpha.row_labels, n_cols=len(a))

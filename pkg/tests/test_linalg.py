from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from cactoid.linalg import (DimensionError, Matrix, PivotError, SingularMatrixError, cofactor_sum,
                            cofactor_sum_naive, det, format_rational, inverse, rank, rank_one,
                            schur_det, to_rational)

F = Fraction


def mat(rows):
    return Matrix(tuple(tuple(rows_i) for rows_i in rows))


def sym(m: Matrix) -> sympy.Matrix:
    return sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in row] for row in m.rows])


def from_sym(s: sympy.Matrix) -> Matrix:
    return mat([[F(int(x.p), int(x.q)) for x in row] for row in s.tolist()])


rationals = st.builds(F, st.integers(-6, 6), st.integers(1, 4))


@st.composite
def square(draw, max_size=5):
    n = draw(st.integers(1, max_size))
    return Matrix(tuple(tuple(draw(rationals) for _ in range(n)) for _ in range(n)))


# parsing and formatting

@pytest.mark.parametrize("text,value", [("-3", F(-3)), ("1/2", F(1, 2)), ("4/6", F(2, 3)), (" 7 ", F(7))])
def test_to_rational_accepts_canonical_strings(text, value):
    assert to_rational(text) == value


@pytest.mark.parametrize("bad", ["0.5", "1e3", "1/0", "abc", "", "1/-2"])
def test_to_rational_rejects_non_rational_text(bad):
    with pytest.raises((ValueError, ZeroDivisionError)):
        to_rational(bad)


@pytest.mark.parametrize("bad", [0.5, True, None])
def test_to_rational_rejects_floats_and_bools(bad):
    with pytest.raises(TypeError):
        to_rational(bad)


def test_format_rational_is_canonical():
    assert format_rational(F(-6, 2)) == "-3"
    assert format_rational(F(2, -4)) == "-1/2"
    assert format_rational(F(0)) == "0"


def test_ragged_rows_rejected():
    with pytest.raises(DimensionError):
        Matrix(((1, 2), (3,)))


# determinant

def test_det_identity():
    assert det(Matrix.identity(3)) == 1


def test_det_two_by_two():
    assert det(mat([[1, 2], [3, 4]])) == -2


def test_det_printed_figure_matrix():
    printed = mat([
        [0, 2, 3, 2, 1, 5, 6],
        [-2, 0, 1, 0, -1, 3, 4],
        [-3, -1, 0, -1, -2, 2, 3],
        [-2, 0, 1, 0, -1, 3, 4],
        [-1, 1, 2, 1, 0, 4, 5],
        [2, 4, 5, 4, 3, 0, 1],
        [1, 3, 4, 3, 2, 6, 0],
    ])
    assert det(printed) == 0


def test_det_empty_and_non_square():
    assert det(Matrix((), n_cols=0)) == 1
    with pytest.raises(DimensionError):
        det(mat([[1, 2]]))


@settings(max_examples=150, deadline=None)
@given(square())
def test_det_matches_sympy(m):
    assert det(m) == sym(m).det()


@settings(max_examples=80, deadline=None)
@given(square(), square())
def test_det_multiplicative(a, b):
    if a.n_rows == b.n_rows:
        assert det(a @ b) == det(a) * det(b)


# inverse and rank

def test_inverse_identity():
    assert inverse(Matrix.identity(4)).same_values(Matrix.identity(4))


def test_inverse_two_by_two():
    assert inverse(mat([[1, 2], [3, 4]])).same_values(mat([[-2, 1], [F(3, 2), F(-1, 2)]]))


def test_inverse_of_singular_reports_rank():
    with pytest.raises(SingularMatrixError) as info:
        inverse(Matrix.ones(2, 2))
    assert info.value.rank == 1


def test_inverse_swaps_labels():
    m = mat([[2, 1], [1, 1]]).with_labels(["a", "b"], ["x", "y"])
    inv = inverse(m)
    assert inv.row_labels == ("x", "y") and inv.col_labels == ("a", "b")


@settings(max_examples=100, deadline=None)
@given(square())
def test_inverse_matches_sympy(m):
    if det(m) == 0:
        with pytest.raises(SingularMatrixError):
            inverse(m)
    else:
        assert inverse(m).same_values(from_sym(sym(m).inv()))
        assert (m @ inverse(m)).same_values(Matrix.identity(m.n_rows))


@settings(max_examples=100, deadline=None)
@given(square())
def test_rank_matches_sympy(m):
    assert rank(m) == sym(m).rank()


# cofactor sum

def test_cofactor_sum_examples():
    assert cofactor_sum(Matrix.identity(2)) == 2
    assert cofactor_sum(mat([[0, 1], [1, 0]])) == -2
    assert cofactor_sum(mat([[0, 1, 2], [2, 0, 1], [1, 2, 0]])) == 9


def test_cofactor_sum_one_by_one():
    assert cofactor_sum(mat([[5]])) == 1


@settings(max_examples=100, deadline=None)
@given(square())
def test_cofactor_sum_matches_naive_and_adjugate(m):
    fast = cofactor_sum(m)
    assert fast == cofactor_sum_naive(m)
    if m.n_rows > 1:
        assert fast == sum(sym(m).adjugate())


# Schur complement and rank-one

def test_schur_det_examples():
    assert schur_det(mat([[1, 0], [0, 2]]), 1) == 2
    assert schur_det(mat([[1, 2], [3, 4]]), 1) == -2


def test_schur_det_singular_pivot():
    with pytest.raises(PivotError):
        schur_det(mat([[0, 1], [1, 0]]), 1)
    with pytest.raises(DimensionError):
        schur_det(mat([[0, 1], [1, 0]]), 2)


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_schur_det_matches_det(seed):
    import random
    rng = random.Random(seed)
    m = mat([[F(rng.randint(-5, 5), rng.randint(1, 3)) for _ in range(5)] for _ in range(5)])
    for trailing in (False, True):
        try:
            assert schur_det(m, 2, trailing=trailing) == det(m)
        except PivotError:
            block = m.submatrix([2, 3, 4], [2, 3, 4]) if trailing else m.submatrix([0, 1], [0, 1])
            assert det(block) == 0


def test_rank_one_examples():
    ones = Matrix.column([1, 1])
    assert rank_one(ones, ones).same_values(Matrix.ones(2, 2))
    assert rank_one(ones, ones, 0).same_values(Matrix.zeros(2, 2))
    got = rank_one(Matrix.column([1, 2]), Matrix.column([3, 4]), F(1, 2))
    assert got.same_values(mat([[F(3, 2), 2], [3, 4]]))


def test_rank_one_length_mismatch():
    with pytest.raises(DimensionError):
        rank_one(Matrix.column([1, 2]), Matrix.column([1]))


def test_first_mismatch_reports_position():
    a, b = mat([[1, 2], [3, 4]]), mat([[1, 2], [3, 5]])
    assert a.first_mismatch(b) == (1, 1, F(4), F(5))
    assert a.first_mismatch(a) is None

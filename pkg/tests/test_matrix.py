from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from pseudocone.errors import MalformedTable
from pseudocone.matrix import MatQ, Matrix, direct_sum, parse_rational

small = st.fractions(min_value=-5, max_value=5, max_denominator=4)


def square(n):
    return st.lists(small, min_size=n * n, max_size=n * n).map(lambda xs: Matrix(n, n, xs))


sizes = st.integers(1, 3)


@given(sizes.flatmap(lambda n: st.tuples(square(n), square(n), square(n))))
def test_product_is_associative(abc):
    a, b, c = abc
    assert (a @ b) @ c == a @ (b @ c)


@given(sizes.flatmap(lambda n: st.tuples(square(n), square(n))))
def test_trace_is_cyclic_and_additive(ab):
    a, b = ab
    assert (a @ b).trace() == (b @ a).trace()
    assert (a + b).trace() == a.trace() + b.trace()


@given(sizes.flatmap(square))
def test_inverse_is_two_sided(a):
    inv = a.inverse()
    if inv is None:
        return
    ident = Matrix.identity(a.rows)
    assert a @ inv == ident and inv @ a == ident


@given(sizes.flatmap(square), sizes.flatmap(square))
def test_direct_sum_trace(a, b):
    s = direct_sum(a, b)
    assert s.rows == a.rows + b.rows
    assert s.trace() == a.trace() + b.trace()


def test_singular_and_nonsquare_have_no_inverse():
    assert Matrix.from_rows([[1, 2], [2, 4]]).inverse() is None
    assert Matrix(1, 2, [1, 0]).inverse() is None


def test_shape_errors():
    with pytest.raises(MalformedTable):
        Matrix(2, 2, [1, 2, 3])
    with pytest.raises(MalformedTable):
        Matrix.identity(2) @ Matrix.identity(3)


def test_rationals_round_trip_as_strings():
    m = Matrix.from_rows([[Fraction(1, 2), -3], [0, Fraction(-7, 9)]])
    assert m.to_json() == [["1/2", "-3/1"], ["0/1", "-7/9"]]
    assert [[parse_rational(x) for x in row] for row in m.to_json()] == [list(m.row(0)), list(m.row(1))]


def test_matq_category_structure():
    k = MatQ(3)
    assert k.objects == [0, 1, 2, 3]
    m = Matrix.from_rows([[0, 1], [1, 0]])
    assert k.is_iso(m) and k.compose(m, m) == k.identity(2)
    assert k.src(Matrix(2, 3, [0] * 6)) == 3 and k.tgt(Matrix(2, 3, [0] * 6)) == 2

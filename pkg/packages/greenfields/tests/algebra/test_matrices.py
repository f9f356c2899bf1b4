from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy import Matrix as SympyMatrix

from algebra.errors import FieldMismatchError
from algebra.matrices import (
    NO_SOLUTION,
    Matrix,
    determinant,
    factor_polynomial,
    from_poly,
    inverse,
    is_positive_definite,
    minimal_polynomial,
    nullspace,
    polynomial_at_matrix,
    radical_of_symmetric_form,
    rank,
    rational_roots,
    solve_linear,
    to_poly,
)
from algebra.scalars import Cyclotomic, CyclotomicField, PrimeField, Residue

small_ints = st.integers(min_value=-4, max_value=4)


def square_matrices(n: int):
    return st.lists(
        st.lists(small_ints, min_size=n, max_size=n), min_size=n, max_size=n
    ).map(Matrix)


def test_entries_are_converted_to_the_field():
    M = Matrix([[1, 2], [3, 4]])
    assert M[1, 0] == Fraction(3)
    assert isinstance(M[1, 0], Fraction)
    F5 = PrimeField(5)
    assert Matrix([[7]], F5)[0, 0] == Residue(5, 2)


def test_malformed_matrices_are_rejected():
    with pytest.raises(FieldMismatchError):
        Matrix([[1, 2], [3]])
    with pytest.raises(FieldMismatchError):
        Matrix([[1]], row_labels=["a", "b"])
    with pytest.raises(FieldMismatchError):
        Matrix([[1, 2]], col_labels=["x", "x"])


def test_rank_and_nullspace():
    M = Matrix([[1, 2, 3], [2, 4, 6], [1, 0, 1]])
    assert rank(M) == 2
    kernel = nullspace(M)
    assert len(kernel) == 1
    assert M.apply(kernel[0]) == [0, 0, 0]
    assert rank(Matrix.zeros(3, 2)) == 0


def test_rank_depends_on_characteristic():
    entries = [[1, 1], [1, 3]]
    assert rank(Matrix(entries)) == 2
    assert rank(Matrix(entries, PrimeField(2))) == 1


def test_solve_linear():
    M = Matrix([[1, 1], [1, -1]])
    assert solve_linear(M, [3, 1]) == [2, 1]
    singular = Matrix([[1, 1], [2, 2]])
    assert solve_linear(singular, [1, 3]) is NO_SOLUTION
    assert solve_linear(singular, [1, 2]) == [1, 0]


def test_inverse_and_determinant():
    M = Matrix([[2, 1], [1, 1]])
    assert determinant(M) == 1
    assert (M @ inverse(M)).entries == Matrix.identity(2).entries
    with pytest.raises(ZeroDivisionError):
        inverse(Matrix([[1, 2], [2, 4]]))
    assert determinant(Matrix([[0, 1], [1, 0]])) == -1


def test_radical_of_a_degenerate_form():
    gram = Matrix([[1, 1], [1, 1]])
    radical = radical_of_symmetric_form(gram)
    assert radical == [[-1, 1]]
    assert radical_of_symmetric_form(Matrix.identity(3)) == []
    with pytest.raises(FieldMismatchError):
        radical_of_symmetric_form(Matrix([[1, 2]]))


def test_positive_definite_with_witness():
    assert is_positive_definite(Matrix([[2, 1], [1, 2]])).positive_definite
    result = is_positive_definite(Matrix([[1, 2], [2, 1]]))
    assert not result.positive_definite
    assert result.witness_value == -3
    v = result.witness
    assert Matrix([[1, 2], [2, 1]]).bilinear(v, v) == result.witness_value


def test_positive_definite_needs_rational_symmetric_input():
    with pytest.raises(FieldMismatchError):
        is_positive_definite(Matrix([[1, 0], [1, 1]]))
    with pytest.raises(FieldMismatchError):
        is_positive_definite(Matrix([[1]], PrimeField(3)))


def test_minimal_polynomial():
    # projection: x^2 - x
    P = Matrix([[1, 0], [0, 0]])
    assert minimal_polynomial(P) == [0, -1, 1]
    assert minimal_polynomial(Matrix.identity(3)) == [-1, 1]
    J = Matrix([[0, 1], [0, 0]])
    assert minimal_polynomial(J) == [0, 0, 1]


def test_polynomial_helpers():
    poly = [-2, 1, 1]  # (x - 1)(x + 2)
    assert rational_roots(poly) == [-2, 1]
    assert rational_roots([1, 0, 1]) == []
    assert rational_roots([0, -1, 2]) == [0, Fraction(1, 2)]
    F3 = PrimeField(3)
    assert rational_roots([F3.convert(2), 0, 1], F3) == [Residue(3, 1), Residue(3, 2)]
    assert from_poly(to_poly(poly)) == poly


def test_factoring_depends_on_the_field():
    # x^2 + 1 is irreducible over Q and F3 but splits over F5
    assert [e for _, e in factor_polynomial([1, 0, 1])] == [1]
    assert len(factor_polynomial([1, 0, 1], PrimeField(3))) == 1
    assert len(factor_polynomial([1, 0, 1], PrimeField(5))) == 2
    ((f, e),) = factor_polynomial([1, 2, 1])
    assert e == 2
    assert from_poly(f) == [1, 1]


def test_polynomial_at_matrix():
    J = Matrix([[0, 1], [0, 0]])
    assert polynomial_at_matrix(to_poly([0, 0, 1]), J).entries == Matrix.zeros(2, 2).entries
    assert polynomial_at_matrix(to_poly([1, 1]), J).entries == [[1, 1], [0, 1]]


def test_cyclotomic_matrices():
    K = CyclotomicField(3)
    z = Cyclotomic.root(3)
    M = Matrix([[1, z], [z * z, 1]], K)
    # det = 1 - z^3 = 0
    assert determinant(M) == 0
    assert rank(M) == 1
    D = Matrix([[Cyclotomic.root(3), 0], [0, 1]], K)
    assert inverse(D)[0, 0] == Cyclotomic.root(3, 2)


@settings(max_examples=30)
@given(square_matrices(3))
def test_rank_nullity(M):
    assert rank(M) + len(nullspace(M)) == 3
    assert rank(M) == rank(M.transpose())
    assert (determinant(M) != 0) == (rank(M) == 3)


@settings(max_examples=30)
@given(square_matrices(3))
def test_agrees_with_sympy_matrices(M):
    reference = SympyMatrix([[int(x) for x in row] for row in M.entries])
    assert rank(M) == reference.rank()
    assert determinant(M) == Fraction(int(reference.det()))
    assert polynomial_at_matrix(to_poly(minimal_polynomial(M)), M).entries == Matrix.zeros(3, 3).entries

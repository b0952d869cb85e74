from fractions import Fraction
from math import factorial, prod

from hypothesis import given
from hypothesis import strategies as st

from semibound.linalg import det_int, nullspace, rank, rref, square_submatrices


def cauchy_hilbert_det(n: int) -> Fraction:
    # det of the Hilbert matrix 1/(i+j+1) via the Cauchy determinant formula
    num = prod(Fraction(j - i) ** 2 for i in range(n) for j in range(i + 1, n))
    den = prod(Fraction(i + j + 1) for i in range(n) for j in range(n))
    return num / den


def test_scaled_hilbert_determinants_match_cauchy_formula():
    for n in range(1, 7):
        scale = 2 * n + 1
        f = factorial(scale)
        rows = [[f // (i + j + 1) for j in range(n)] for i in range(n)]
        assert det_int(rows) == cauchy_hilbert_det(n) * f ** n


def test_frozen_small_determinants():
    assert det_int([[4, 2], [2, 3]]) == 8
    assert det_int([[0, 1], [1, 0]]) == -1
    assert det_int([[1, 2], [2, 4]]) == 0
    assert det_int([]) == 1


small_matrix = st.integers(1, 4).flatmap(
    lambda n: st.lists(st.lists(st.integers(-9, 9), min_size=n, max_size=n), min_size=n, max_size=n))


@given(small_matrix)
def test_det_agrees_with_sympy(rows):
    import sympy
    assert det_int(rows) == sympy.Matrix(rows).det()


@given(st.lists(st.lists(st.integers(-5, 5), min_size=4, max_size=4), min_size=1, max_size=4))
def test_nullspace_vectors_are_annihilated(rows):
    basis = nullspace(rows, 4)
    assert len(basis) == 4 - rank(rows)
    for v in basis:
        assert all(sum(Fraction(a) * b for a, b in zip(r, v)) == 0 for r in rows)


def test_rref_pivots():
    R, piv = rref([[1, 2, 3], [2, 4, 7]])
    assert piv == [0, 2]
    assert R[0] == [1, 2, 0]


def test_square_submatrix_count():
    rows = [[1, 2, 3], [4, 5, 6]]
    # 6 singletons and 3 two-by-two blocks
    assert sum(1 for _ in square_submatrices(rows)) == 9

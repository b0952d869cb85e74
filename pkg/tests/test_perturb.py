from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from semibound.bounds import bound_report
from semibound.linalg import det_int, square_submatrices
from semibound.perturb import (InvalidSystemError, SemialgSystem, SubsetSelector,
                               bertrand_prime, build_matrix_A, compactify, homogenized_constraint,
                               lagrange_family, membership_T_t, perturbed_family,
                               tilde_constraint, tilde_objective, u_polynomial)
from semibound.polycore import IntPolynomial, parse_polynomial

from conftest import make_system
from strategies import points

SLOTS_H = ("t0", "t", "x0", "x1", "x2")


def P(text, names):
    return parse_polynomial(text, names)


@pytest.mark.parametrize("n, m, p", [(2, 1, 5), (2, 2, 7), (3, 3, 11)])
def test_bertrand_prime(n, m, p):
    assert bertrand_prime(n, m) == p


def test_matrix_small_case():
    A = build_matrix_A(2, 1)
    # 4! / (i+j+1) = [[24,12,8],[12,8,6]] reduced mod 5
    assert A.entries == ((4, 2, 3), (2, 3, 1))
    assert A.prime_used == 5
    assert max(max(r) for r in A.entries) <= 6
    assert A.singular_submatrices() == []


@pytest.mark.parametrize("n, m", [(2, 1), (3, 2), (4, 3)])
def test_matrix_minors_all_nonzero(n, m):
    A = build_matrix_A(n, m)
    assert all(0 < a <= 2 * (n + m) for row in A.entries for a in row)
    assert all(det_int(sub) != 0 for _, _, sub in square_submatrices(A.entries))


def test_matrix_rejects_small_sizes():
    with pytest.raises(InvalidSystemError):
        build_matrix_A(1, 1)


def test_tilde_polynomials_follow_row_convention():
    A = build_matrix_A(2, 1)
    assert tilde_constraint(1, A, 2, 2) == P("3*x1^2 + x2^2 + 2", ("x1", "x2"))
    assert tilde_objective(A, 2, 2) == P("2*x1^2 + 3*x2^2 + 4", ("x1", "x2"))
    assert tilde_objective(A, 2, 2).total_degree() == 2


@given(points(2))
def test_tilde_positive_everywhere(pt):
    A = build_matrix_A(2, 1)
    assert tilde_constraint(1, A, 2, 2).evaluate(pt) > 0


def test_perturbed_family_circle(circle):
    A = build_matrix_A(2, 1)
    fam = perturbed_family(circle, A)
    assert [f.label for f in fam] == ["F1+", "F1-", "G"]
    names = ("t", "x1", "x2")
    assert fam[0].poly == P("x1^2 + x2^2 - 1 + t*(3*x1^2 + x2^2 + 2)", names)
    assert fam[0].poly - fam[1].poly == P("2*t*(3*x1^2 + x2^2 + 2)", names)
    for f in fam[:2]:
        assert f.poly.substitute_value(0, 0) == circle.equalities[0]


def test_homogenized_constraint_circle(circle):
    A = build_matrix_A(2, 1)
    F = homogenized_constraint(circle, A, 1, 1).poly
    assert F == P("t0*(x1^2 + x2^2 - x0^2) + t*(2*x0^2 + 3*x1^2 + x2^2)", SLOTS_H)
    unperturbed = F.substitute_value(1, 0).substitute_value(0, 1)
    assert unperturbed == circle.equalities[0].homogenize(2)
    limit = F.substitute_value(1, 1).substitute_value(0, 0)
    assert limit == P("2*x0^2 + 3*x1^2 + x2^2", ("x0", "x1", "x2"))


def test_lagrange_forms_circle(circle):
    A = build_matrix_A(2, 1)
    G1, G2 = (f.poly for f in lagrange_family(circle, A, SubsetSelector((1,), (1,))))
    names = SLOTS_H + ("lam0", "lam1")
    a01, a02, a11, a12 = A[0, 1], A[0, 2], A[1, 1], A[1, 2]
    assert G1 == P(f"t0*(lam0*x0 - 2*lam1*x1) + t*2*x1*({a01}*lam0 - {a11}*lam1)", names)
    assert G2 == P(f"t0*(0 - 2*lam1*x2) + t*2*x2*({a02}*lam0 - {a12}*lam1)", names)


def test_lagrange_rejects_bad_selector(circle):
    A = build_matrix_A(2, 1)
    with pytest.raises(InvalidSystemError):
        lagrange_family(circle, A, SubsetSelector((2,), (1,)))
    sys = make_system([], ["x1"], "x2")
    with pytest.raises(InvalidSystemError):
        lagrange_family(sys, build_matrix_A(2, 1), SubsetSelector((1,), (-1,)))


@pytest.mark.parametrize("g, want", [("x1", "U*x0 - x1"), ("x1^2 + x2^2", "U*x0^2 - x1^2 - x2^2")])
def test_u_polynomial(circle, g, want):
    sys = circle.with_objective(P(g, ("x1", "x2")))
    assert u_polynomial(sys).poly == P(want, ("U", "x0", "x1", "x2"))


@given(points(2))
def test_u_polynomial_vanishes_on_graph(pt):
    sys = make_system(["x1^2 + x2^2 - 1"], [], "x1^3 - 2*x1*x2 + 5")
    P_ = u_polynomial(sys).poly
    assert P_.evaluate((sys.objective.evaluate(pt), Fraction(1)) + pt) == 0


def test_compactify(circle):
    C = compactify(circle, 1)
    assert C.inequalities[-1] == P("4 - x1^2 - x2^2", ("x1", "x2"))
    assert bound_report(C).magnitude_bound == bound_report(circle).magnitude_bound
    assert not C.is_feasible((Fraction(3), Fraction(0)))


def test_membership_relaxation(circle):
    A = build_matrix_A(2, 1)
    assert not membership_T_t(circle, A, 0, (Fraction(2), Fraction(0)))
    assert membership_T_t(circle, A, 0, (Fraction(1), Fraction(0)))
    for t in (Fraction(1, 3), 1, 5):
        assert membership_T_t(circle, A, t, (Fraction(1), Fraction(0)))


@given(points(2), st.fractions(0, 4))
def test_membership_reduces_at_zero_and_grows(pt, t):
    sys = make_system(["x1^2 + x2^2 - 1"], ["x1"], "x2")
    A = build_matrix_A(2, 2)
    assert membership_T_t(sys, A, 0, pt) == sys.is_feasible(pt)
    if membership_T_t(sys, A, t, pt):
        assert membership_T_t(sys, A, t + 1, pt)


def test_system_summaries(circle):
    assert (circle.n, circle.l, circle.m, circle.d, circle.H, circle.d0, circle.H0) == (2, 1, 1, 2, 1, 1, 1)


def test_odd_override_rejected():
    with pytest.raises(InvalidSystemError, match="d must be even"):
        make_system(["x1^2 + x2^2 - 1"], [], "x1", d=3)


def test_observed_odd_degree_rounds_up():
    assert make_system(["x1^3 - x2"], [], "x1").d == 4


def test_selector_checks():
    with pytest.raises(InvalidSystemError):
        SubsetSelector((2, 1), (1, 1))
    with pytest.raises(InvalidSystemError):
        SubsetSelector((1,), (0,))
    assert SubsetSelector((1, 3), (1, -1)).label() == "S={1+,3-}"
    assert SubsetSelector((), ()).label() == "S={}"


def test_zero_constraint_rejected():
    with pytest.raises(InvalidSystemError):
        SemialgSystem((IntPolynomial.zero(2),), (), IntPolynomial.variable(0, 2))

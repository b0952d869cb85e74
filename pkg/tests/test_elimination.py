import random
from fractions import Fraction
from math import comb

import pytest
import sympy

from semibound import roots
from semibound.bounds import BoundParams, coefficient_bound_M
from semibound.elimination import (Budget, BudgetExceeded, ParamResultant, ResultantSystem,
                                   candidate_minima, certificate_for, limit_system_solutions,
                                   multihomog_resultant, selector_pairs, strip_t_power)
from semibound.perturb import SubsetSelector, build_matrix_A
from semibound.polycore import IntPolynomial

from conftest import make_system

PLUS = SubsetSelector((1,), (1,))


def cert(sys, sel=PLUS, objective=None):
    return certificate_for(sys, build_matrix_A(sys.n, sys.m), sel, objective=objective)


def roots_of(c):
    return {roots.rational_root_in(c.coefficients, iv) for iv in c.roots}


def test_circle_certificate(circle):
    c = cert(circle)
    # hand-derived critical values of x1 on the unit circle
    assert {Fraction(-1), Fraction(1)} <= roots_of(c)
    assert c.coefficients == [-1, 0, 1]
    assert 1 <= c.degree <= 4
    params = BoundParams(n=2, m=1, d=2, d0=1, H=1, H0=1, l=1, s=1)
    assert c.height <= coefficient_bound_M(params)
    for iv in c.roots:
        lo, hi = roots.refine_root(c.coefficients, iv, Fraction(1, 2 ** 20))
        assert hi - lo <= Fraction(1, 2 ** 20)


def test_norm_objective_certificates(circle_norm):
    A = build_matrix_A(2, 1)
    empty = certificate_for(circle_norm, A, SubsetSelector((), ()))
    assert empty.coefficients == [0, 1]
    active = certificate_for(circle_norm, A, PLUS)
    assert roots_of(active) == {Fraction(1)}


def test_ellipse_certificate():
    sys = make_system(["4*x1^2 + x2^2 - 4"], [], "x2")
    assert roots_of(cert(sys)) == {Fraction(-2), Fraction(2)}


def test_two_constraint_certificate():
    sys = make_system(["x1^2 + x2^2 - 1"], ["x1"], "x2")
    c = cert(sys, SubsetSelector((1, 2), (1, 1)))
    assert {Fraction(-1), Fraction(1)} <= roots_of(c)


def test_all_pairs_on_circle(circle):
    cs = candidate_minima(circle)
    assert len(cs.certificates) == 3
    assert any(roots.isolating_contains(iv, Fraction(-1)) for iv in cs.intervals)


def test_pair_count_matches_combinatorial_counter():
    sys = make_system(["x1^2 + x2^2 - 1", "x1 - x2"], ["x1", "x2 + 3"], "x1", names=("x1", "x2"))
    n, m, l = 2, 4, 2
    want = sum(comb(l, e) * comb(m - l, s - e) * 2 ** e
               for s in range(0, min(n, m) + 1) for e in range(0, min(s, l) + 1))
    assert len(selector_pairs(sys)) == want


def test_strip_examples():
    t = IntPolynomial.variable
    R = t(1, 3) ** 2 * (t(0, 3) + t(1, 3)) * t(2, 3)
    pr = strip_t_power(ParamResultant(R, 4, PLUS))
    assert pr.e == 2
    assert pr.R_tilde == (t(0, 3) + t(1, 3)) * t(2, 3)
    assert strip_t_power(pr) is pr
    free = strip_t_power(ParamResultant(t(0, 3) ** 2 * t(2, 3) + t(1, 3) ** 2, 2, PLUS))
    assert free.e == 0


def test_resultant_against_lex_elimination(circle):
    """Roots in U of R(1, t*, U) are the objective values at the solutions of the
    specialized system, found here by an independent lex elimination."""
    A = build_matrix_A(2, 1)
    rs = ResultantSystem.build(circle, A, PLUS)
    pr = multihomog_resultant(rs)
    assert pr.is_homogeneous()
    x1, x2, l0, l1, U = sympy.symbols("x1 x2 l0 l1 U")
    for tstar in (Fraction(1, 2), Fraction(3)):
        t = sympy.Rational(tstar.numerator, tstar.denominator)
        F = (x1 ** 2 + x2 ** 2 - 1) + t * (A[1, 0] + A[1, 1] * x1 ** 2 + A[1, 2] * x2 ** 2)
        G1 = (l0 - 2 * l1 * x1) + t * 2 * x1 * (A[0, 1] * l0 - l1 * A[1, 1])
        G2 = (0 - 2 * l1 * x2) + t * 2 * x2 * (A[0, 2] * l0 - l1 * A[1, 2])
        # the multipliers are projective: charts l0 = 1 and (l0, l1) = (0, 1)
        elim = sympy.Poly(1, U)
        for chart, free in (({l0: 1}, (l1,)), ({l0: 0, l1: 1}, ())):
            eqs = [e.subs(chart) for e in (F, G1, G2)] + [U - x1]
            lex = sympy.groebner(eqs, x1, x2, *free, U, order="lex")
            if lex.exprs != [1]:
                elim = elim * sympy.Poly(lex.exprs[-1], U)
        terms = {}
        for (a, b, c), v in pr.R.terms.items():
            terms[c] = terms.get(c, 0) + v * t ** b
        specialized = sympy.Poly(sum(v * U ** k for k, v in terms.items()), U)
        assert sympy.rem(specialized.sqf_part(), elim.sqf_part(), U).is_zero
        assert sympy.rem(elim.sqf_part(), specialized.sqf_part(), U).is_zero


# -- structural properties on seeded random instances ------------------------------

def _random_linear_objectives(k, seed=20240611):
    rng = random.Random(seed)
    out = []
    while len(out) < k:
        a, b = rng.randint(-3, 3), rng.randint(-3, 3)
        if (a, b) != (0, 0):
            out.append((a, b))
    return out


@pytest.mark.parametrize("a, b", _random_linear_objectives(3))
def test_homogeneity_strip_and_sign_flip(circle, a, b):
    A = build_matrix_A(2, 1)
    x1, x2 = (IntPolynomial.variable(j, 2) for j in range(2))
    g = x1.scale(a) + x2.scale(b)
    rs = ResultantSystem.build(circle, A, PLUS, g)
    pr = multihomog_resultant(rs)
    assert pr.is_homogeneous() and pr.R.total_degree() >= pr.degree
    once = strip_t_power(pr)
    assert strip_t_power(once) is once
    assert once.R == IntPolynomial(3, {(x, y + once.e, z): v
                                       for (x, y, z), v in once.R_tilde.terms.items()})
    plus = certificate_for(circle, A, PLUS, objective=g)
    minus = certificate_for(circle, A, PLUS, objective=-g)
    # roots of the certificate for -g are the negated roots for g
    flipped = [c * (-1) ** k for k, c in enumerate(plus.coefficients)]
    if flipped[-1] < 0:
        flipped = [-c for c in flipped]
    assert roots.squarefree_part(flipped) == roots.squarefree_part(minus.coefficients)


def test_budget_guard_trips_fast():
    names = ("a", "b", "c", "w")
    sys = make_system(["a^6 + b^6 + c^6 + w^6 - 1"], [], "a", names=names)
    with pytest.raises(BudgetExceeded, match="exceeds"):
        candidate_minima(sys)


def test_budget_guard_names_the_size(circle):
    with pytest.raises(BudgetExceeded, match="matrix limit"):
        cert_budget = Budget(max_matrix_dim=1)
        certificate_for(circle, build_matrix_A(2, 1), PLUS, cert_budget)


# -- the limit system ------------------------------------------------------------

@pytest.mark.parametrize("d", [2, 4])
@pytest.mark.parametrize("S, sigma", [((1,), (1,)), ((1,), (-1,)), ((1, 2), (1, -1)), ((1, 2), (1, 1))])
def test_limit_system(d, S, sigma):
    A = build_matrix_A(2, 2)
    rep = limit_system_solutions(A, S, sigma, 2, d)
    assert rep.ok, rep
    s = len(S)
    for case in rep.cases:
        if case.case == "balanced":
            assert case.affine_solutions == d ** s


def test_limit_binomial_count_by_hand():
    A = build_matrix_A(2, 1)
    x1 = sympy.symbols("x1")
    # J = {2}, s = 1: a11 x1^2 + a10 x0^2 = 0 with x0 = 1
    assert len(sympy.roots(A[1, 1] * x1 ** 2 + A[1, 0], x1)) == 2

from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from semibound.oracle import (ComponentSpec, InfeasibleSeed, OracleBudget, OracleBudgetExceeded,
                              enumerate_kkt, example_components, example_family, example_points,
                              reference_minimum, separation_oracle)
from semibound.perturb import SemialgSystem
from semibound.polycore import IntPolynomial

from conftest import BOX2, make_system

WIDTH = Fraction(1, 2 ** 20)


def spec(seed, box=BOX2, resolution=16):
    return ComponentSpec(seed, box, resolution)


@pytest.mark.parametrize("eqs, ineqs, g, seed, want", [
    (["x1^2 + x2^2 - 1"], [], "x1", (1, 0), -1),
    (["x1^2 + x2^2 - 1"], [], "x1^2 + x2^2", (1, 0), 1),
    (["4*x1^2 + x2^2 - 4"], [], "x2", (1, 0), -2),
    (["x1^2 + x2^2 - 1"], ["x1"], "x2", (1, 0), -1),
    (["x1^2 + x2^2 - 1"], [], "(x1 - 1)^2", (1, 0), 0),
])
def test_reference_minimum_hand_values(eqs, ineqs, g, seed, want):
    enc = reference_minimum(make_system(eqs, ineqs, g), spec(seed))
    assert enc.lo <= want <= enc.hi
    assert enc.width <= WIDTH
    assert enc.certified


def test_infeasible_seed_rejected(circle):
    with pytest.raises(InfeasibleSeed):
        reference_minimum(circle, spec((2, 2)))


def test_oracle_budget_enforced(circle):
    with pytest.raises(OracleBudgetExceeded):
        reference_minimum(circle, spec((1, 0)), Fraction(1, 2 ** 30), OracleBudget(max_cells=50))


@settings(max_examples=8)
@given(st.integers(-4, 4), st.integers(-4, 4))
def test_linear_objective_on_circle_matches_closed_form(a, b):
    if (a, b) == (0, 0):
        return
    x1, x2 = (IntPolynomial.variable(j, 2) for j in range(2))
    sys = make_system(["x1^2 + x2^2 - 1"], [], "x1").with_objective(x1.scale(a) + x2.scale(b))
    enc = reference_minimum(sys, spec((1, 0)))
    r2 = a * a + b * b
    # min is -sqrt(r2): check hi^2 <= r2 <= lo^2 with both endpoints negative
    assert enc.hi <= 0 and enc.hi ** 2 <= r2 <= enc.lo ** 2


def test_kkt_points_on_circle(circle):
    pts = enumerate_kkt(circle, spec((1, 0)))
    assert all(p.S == (1,) for p in pts)
    xs = sorted(round(p.point[0], 9) for p in pts)
    assert xs == [-1.0, 1.0]
    assert all(abs(p.point[1]) < 1e-9 and p.feasible for p in pts)


def test_kkt_origin_is_filtered_as_infeasible(circle_norm):
    free = [p for p in enumerate_kkt(circle_norm, spec((1, 0))) if p.S == ()]
    assert len(free) == 1 and free[0].point == (0.0, 0.0) and not free[0].feasible


def test_two_unit_circles_are_two_apart():
    A = make_system(["x1^2 + x2^2 - 1"], [], "x1")
    B = make_system(["x1^2 - 8*x1 + x2^2 + 15"], [], "x1")
    box_b = ((Fraction(2), Fraction(6)), (Fraction(-2), Fraction(2)))
    enc = separation_oracle(A, B, spec((1, 0), resolution=4), spec((3, 0), box_b, 4))
    assert enc.lo <= 2 <= enc.hi and enc.width <= WIDTH


def test_identical_sets_have_distance_zero(circle):
    enc = separation_oracle(circle, circle, spec((1, 0), resolution=4), spec((1, 0), resolution=4))
    assert enc.lo == 0
    assert enc.notes


def test_example_points_split_by_sign_constraint():
    sys, dist = example_family(2, 2, 4)
    last = IntPolynomial.variable(1, 2)
    upper = SemialgSystem(sys.equalities, (last,), sys.objective)
    lower = SemialgSystem(sys.equalities, (-last,), sys.objective)
    p, q = example_points(2, 2, 4)
    assert p == (Fraction(1, 4), Fraction(1, 4)) and q == (Fraction(1, 4), Fraction(-1, 4))
    enc = separation_oracle(upper, lower, spec(p, resolution=4), spec(q, resolution=4))
    assert enc.lo <= Fraction(1, 2) <= enc.hi
    assert dist.to_fraction() == Fraction(1, 2)


@pytest.mark.parametrize("n, d, H", [(2, 2, 4), (3, 2, 2), (2, 4, 2)])
def test_example_family_has_exactly_two_points(n, d, H):
    sys, dist = example_family(n, d, H)
    xs = sympy.symbols(f"x1:{n + 1}")
    exprs = [sympy.Poly.from_dict(f.terms, *xs).as_expr() for f in sys.equalities]
    sols = sympy.solve(exprs, xs, dict=True)
    real = [s for s in sols if all(v.is_real for v in s.values())]
    assert len(real) == 2
    p, q = example_points(n, d, H)
    assert {tuple(Fraction(str(s[x])) for x in xs) for s in real} == {p, q}
    gap = p[-1] - q[-1]
    # closed form 2 H^(-d^(n-1)/2), compared squared to stay rational
    assert gap ** 2 == Fraction(4, H ** (d ** (n - 1)))
    assert dist ** 2 == type(dist).of([(4, 1), (H, -(d ** (n - 1)))])


def test_example_components_isolate_points():
    A, B, ca, cb, dist = example_components(3, 2, 2)
    enc = separation_oracle(A, B, ca, cb)
    assert enc.lo <= dist.to_fraction() <= enc.hi


def test_component_spec_validation():
    with pytest.raises(InfeasibleSeed):
        ComponentSpec((5, 0), BOX2)
    with pytest.raises(ValueError):
        ComponentSpec((0, 0), ((1, 1), (0, 1)))

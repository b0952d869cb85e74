from fractions import Fraction
from math import comb

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from semibound.bounds import (BoundParams, BoundTooLarge, M_within_magnitude_ceiling, PowerExpr,
                              bezout_numbers, bound_report, chain_inequalities,
                              coefficient_bound_M, coefficient_bound_M_log2, compare_abs_to_bound,
                              coprime_basis, degree_bound, final_inequality, log2_binomial_enclosure,
                              log2_enclosure, magnitude_bound, magnitude_bound_for,
                              proof_inequalities, separation_bound, support_sizes)

from conftest import make_system

mpmath.mp.prec = 400


def mp(x: Fraction):
    return mpmath.mpf(x.numerator) / x.denominator


def mp_log2(x: Fraction):
    return mpmath.log(mp(x), 2)


def within(enc, value) -> bool:
    return mp(enc[0]) <= value <= mp(enc[1])


@pytest.mark.parametrize("n, d, want", [(2, 2, 8), (3, 2, 32), (2, 4, 32)])
def test_degree_bound(n, d, want):
    assert degree_bound(n, d) == want


def test_magnitude_bound_circle_value():
    b = magnitude_bound_for(2, 2, 6)
    assert b == PowerExpr.power(192, -32)
    assert b.to_fraction() == Fraction(1, 192 ** 32)
    lo, hi = b.log2_enclosure()
    assert within((lo, hi), -32 * mp_log2(Fraction(192)))
    assert float(lo) == pytest.approx(-242.7188, abs=1e-4)


def test_magnitude_bound_half_integer_exponent():
    b = magnitude_bound_for(3, 2, 10)
    # squared form has integer data: (2^5 * 100 * 64)^(-3 * 8 * 8)
    assert b ** 2 == PowerExpr.power(2 ** 5 * 100 * 64, -192)
    assert b == PowerExpr.of([(2, Fraction(-5, 2) * 192), (10, -192), (2, -3 * 192)])


def test_separation_bound_example():
    assert separation_bound(2, 2, 4, 2, 2) == PowerExpr.power(1024, -512)


@pytest.mark.parametrize("n", range(2, 7))
def test_separation_squared_is_magnitude_in_doubled_dimension(n):
    for d, H, m1, m2 in ((2, 4, 2, 2), (4, 100, 1, 3)):
        sep = separation_bound(n, d, H, m1, m2)
        mag = magnitude_bound(BoundParams(2 * n, m1 + m2, d, 1, H, 1))
        assert sep ** 2 == mag


def test_bezout_and_support_sizes():
    assert bezout_numbers(2, 1, 2, 2) == (4, 4, 4)
    assert bezout_numbers(2, 2, 2, 1)[0] == 4
    assert bezout_numbers(3, 1, 2, 2)[0] == 6
    assert support_sizes(2, 1, 2, 2) == (6, 6, 6)
    assert support_sizes(2, 1, 4, 2)[1] == 15
    assert support_sizes(3, 2, 2, 1)[2] == 12


def test_coefficient_bound_frozen_value():
    # each factor recomputed by hand: (2H0)^M1 (2Ht)^(sM2+nM3) d^(nM3) N1^M1 N2^(sM2) N3^(nM3) * binomials
    want = (2 ** 4 * 12 ** 6 * 2 ** 4 * 3 ** 4 * 6 ** 2 * 6 ** 4
            * comb(6, 2) * comb(7, 5) * comb(7, 5) ** 2)
    assert want == 401299950381312245760
    p = BoundParams(n=2, m=1, d=2, d0=1, H=1, H0=1, l=1, s=1)
    assert coefficient_bound_M(p) == want
    lo, hi = coefficient_bound_M_log2(p)
    assert within((lo, hi), mp_log2(Fraction(want)))


def test_coefficient_bound_monotone_in_htilde():
    base = dict(n=2, m=1, d=2, d0=1, H=1, H0=1, l=1, s=1)
    values = [coefficient_bound_M(BoundParams(**base, Htilde_override=h)) for h in (6, 7, 50)]
    assert values == sorted(set(values))


def test_coefficient_bound_too_large_refused():
    with pytest.raises(BoundTooLarge):
        coefficient_bound_M(BoundParams(n=8, m=8, d=8, d0=8, H=1, H0=1, s=4))


@pytest.mark.parametrize("n", range(2, 21))
def test_final_inequality(n):
    assert final_inequality(n)


def test_proof_inequality_examples():
    checks = dict(proof_inequalities(BoundParams(n=2, m=1, d=2, d0=2, H=1, H0=1, s=1)))
    assert checks["N3 <= 9/4 d^n"]
    for d0 in (1, 2):
        assert dict(proof_inequalities(BoundParams(n=4, m=1, d=2, d0=d0, H=1, H0=1)))["N1 <= 3/2 d^n"]


@pytest.mark.parametrize("n, d", [(2, 2), (3, 4), (5, 2), (6, 8)])
def test_chain_and_ceiling(n, d):
    for s in range(0, n + 1):
        p = BoundParams(n=n, m=n, d=d, d0=d, H=6, H0=6, s=s)
        assert all(ok for _, ok in chain_inequalities(p))
        assert M_within_magnitude_ceiling(p)


def test_compare_abs_to_bound():
    b = PowerExpr.power(192, -32)
    assert compare_abs_to_bound(-1, b) == 1
    assert compare_abs_to_bound(Fraction(1, 192 ** 32), b) == 0
    assert compare_abs_to_bound(Fraction(1, 192 ** 33), b) == -1
    with pytest.raises(ValueError):
        compare_abs_to_bound(0, b)


def test_bound_report_circle(circle):
    rep = bound_report(circle)
    assert rep.degree_bound == 8
    assert rep.magnitude_bound == PowerExpr.power(192, -32)
    assert [c.s for c in rep.components] == [0, 1]


def test_bound_report_uses_objective_height():
    rep = bound_report(make_system(["x1^2 + x2^2 - 1"], [], "100*x1"))
    assert rep.params.H == 100 and rep.params.Htilde == 100


# -- certified enclosures and exact power products --------------------------------

@given(st.integers(1, 10 ** 40), st.integers(1, 10 ** 6))
def test_log2_enclosure_contains_true_value(a, b):
    x = Fraction(a, b)
    lo, hi = log2_enclosure(x)
    assert within((lo, hi), mp_log2(x))
    assert hi - lo <= Fraction(1, 2 ** 40)


@given(st.integers(1, 3000), st.data())
def test_log2_binomial_enclosure(a, data):
    b = data.draw(st.integers(0, a))
    lo, hi = log2_binomial_enclosure(a, b)
    assert within((lo, hi), mp_log2(Fraction(comb(a, b))))


def test_log2_binomial_enclosure_large_arguments():
    a, b = 10 ** 9, 10 ** 5
    lo, hi = log2_binomial_enclosure(a, b)
    exact = (mpmath.loggamma(a + 1) - mpmath.loggamma(b + 1) - mpmath.loggamma(a - b + 1)) / mpmath.log(2)
    assert within((lo, hi), exact)


@given(st.lists(st.integers(2, 500), min_size=1, max_size=6))
def test_coprime_basis_is_pairwise_coprime_and_factors_inputs(nums):
    from math import gcd
    basis = coprime_basis(nums)
    assert all(gcd(a, b) == 1 for i, a in enumerate(basis) for b in basis[i + 1:])
    for x in nums:
        r = x
        for b in basis:
            while r % b == 0:
                r //= b
        assert r == 1


small_power = st.lists(st.tuples(st.integers(2, 30), st.integers(-4, 4)), max_size=4)


def _value(parts):
    v = Fraction(1)
    for b, e in parts:
        v *= Fraction(b) ** e
    return v


@given(small_power, small_power)
def test_power_expr_matches_fraction_arithmetic(a, b):
    A, B = PowerExpr.of(a), PowerExpr.of(b)
    assert (A * B).to_fraction() == _value(a) * _value(b)
    assert (A / B).to_fraction() == _value(a) / _value(b)
    assert (A == B) == (_value(a) == _value(b))
    v = _value(b)
    assert A.compare(v) == (v > _value(a)) - (v < _value(a))


def test_power_expr_canonical_forms():
    assert PowerExpr.power(4, 3) == PowerExpr.power(2, 6)
    assert PowerExpr.power(12, -1) * PowerExpr.power(3, 1) == PowerExpr.power(4, -1)
    assert PowerExpr.power(8, Fraction(1, 3)) == PowerExpr.power(2, 1)

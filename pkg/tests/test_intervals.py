from fractions import Fraction

import pytest
from gmpy2 import mpq
from hypothesis import given
from hypothesis import strategies as st

from semibound.intervals import (CompiledPoly, Iv, combine, isqrt_enclosure, krawczyk,
                                 krawczyk_contract, to_fraction)
from semibound.polycore import parse_polynomial

from strategies import polynomials, rationals

N2 = ("x1", "x2")


def C(text):
    return CompiledPoly(parse_polynomial(text, N2))


boxes = st.tuples(rationals(3, 4), rationals(3, 4), rationals(1, 4), rationals(1, 4)).map(
    lambda v: (Iv(v[0], v[0] + abs(v[2])), Iv(v[1], v[1] + abs(v[3]))))


@given(polynomials(2), boxes, st.floats(0, 1), st.floats(0, 1))
def test_range_enclosures_contain_point_values(p, box, u, v):
    f = CompiledPoly(p)
    pt = [b.lo + mpq(Fraction(u)) * b.width for b, u in zip(box, (u, v))]
    val = p.evaluate(tuple(to_fraction(x) for x in pt))
    assert f.over(box).contains(val)
    assert f.centered(box).contains(val)
    assert f.at(pt) == val


@given(st.tuples(rationals(), rationals()), st.tuples(rationals(), rationals()))
def test_interval_product_contains_products(a, b):
    A, B = Iv(min(a), max(a)), Iv(min(b), max(b))
    for x in a:
        for y in b:
            assert (A * B).contains(x * y)
            assert (A - B).contains(x - y)


def test_even_power_is_tight():
    assert (Iv(-2, 1) ** 2).lo == 0
    assert (Iv(-2, 1) ** 2).hi == 4
    assert (Iv(-3, -1) ** 3).lo == -27


def test_combine_cancels_exactly():
    g = C("x1^2 + x2^2")
    f = C("x1^2 + x2^2 - 1")
    L = combine(g, [f], [mpq(1)])
    box = (Iv(-5, 5), Iv(-5, 5))
    assert L.over(box).lo == L.over(box).hi == 1


def test_krawczyk_certifies_sqrt2():
    f = CompiledPoly(parse_polynomial("x1^2 - 2", ("x1",)))
    assert krawczyk([f], [0], [Iv(Fraction(13, 10), Fraction(3, 2))], [mpq(7, 5)])
    assert not krawczyk([f], [0], [Iv(Fraction(3, 2), 2)], [mpq(7, 4)])


def test_krawczyk_contract_keeps_the_zero():
    fs = [C("x1^2 + x2^2 - 1"), C("x1 - x2")]
    box = [Iv(Fraction(1, 2), 1), Iv(Fraction(1, 2), 1)]
    out = krawczyk_contract(fs, box)
    r = Fraction(7071067811865475, 10 ** 16)
    assert out is not None and max(b.width for b in out) < Fraction(1, 2 ** 40)
    assert out[0].lo < Fraction(7071067811865476, 10 ** 16) and out[0].hi > r


def test_krawczyk_contract_discards_empty_box():
    fs = [C("x1^2 + x2^2 - 1"), C("x1 - x2")]
    assert krawczyk_contract(fs, [Iv(2, 3), Iv(2, 3)]) is None


@given(st.fractions(0, 100), st.fractions(0, 5))
def test_isqrt_enclosure(lo, extra):
    a, b = isqrt_enclosure(lo, lo + extra)
    assert a * a <= lo and b * b >= lo + extra


def test_empty_interval_rejected():
    with pytest.raises(ValueError):
        Iv(1, 0)

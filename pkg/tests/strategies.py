from fractions import Fraction

from hypothesis import strategies as st

from semibound.polycore import IntPolynomial


def polynomials(num_vars: int, max_exp: int = 3, max_terms: int = 5, coeff: int = 20):
    mono = st.tuples(*[st.integers(0, max_exp)] * num_vars)
    terms = st.dictionaries(mono, st.integers(-coeff, coeff), max_size=max_terms)
    return terms.map(lambda t: IntPolynomial(num_vars, t))


def rationals(bound: int = 10, den: int = 7):
    return st.builds(Fraction, st.integers(-bound * den, bound * den), st.integers(1, den))


def points(num_vars: int):
    return st.tuples(*[rationals()] * num_vars)

"""Exact bounds on the minimum of a polynomial over a semialgebraic component.

Modules: ``polycore`` (integer polynomials), ``perturb`` (perturbed systems),
``bounds`` (closed-form bounds), ``elimination`` (certificate polynomials),
``oracle`` (rigorous numeric minima and distances), ``cli``.
"""

from .bounds import PowerExpr, degree_bound, magnitude_bound, separation_bound
from .perturb import SemialgSystem, SubsetSelector, build_matrix_A
from .polycore import IntPolynomial, parse_polynomial

__all__ = [
    "IntPolynomial",
    "PowerExpr",
    "SemialgSystem",
    "SubsetSelector",
    "build_matrix_A",
    "degree_bound",
    "magnitude_bound",
    "parse_polynomial",
    "separation_bound",
]

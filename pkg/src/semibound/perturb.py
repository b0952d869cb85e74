"""Deformation apparatus for basic closed semialgebraic sets.

Constraint systems, the integer matrix ``A`` whose square submatrices are
all nonsingular, the strictly positive "tilde" polynomials built from its
rows, the one-parameter families ``F_i^{+/-} = f_i +/- t*f~_i`` and
``G = g + t*g~``, their bihomogeneous versions, the Lagrange forms and
the ``U``-polynomial used for elimination.

Row/column convention for ``A``: row 0 belongs to the objective, row ``i``
to constraint ``f_i``; column 0 is the constant-term column.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Sequence

from .linalg import det_int, square_submatrices
from .polycore import IntPolynomial, PolynomialError, RationalPoint


class InvalidSystemError(ValueError):
    """Invalid semialgebraic system or selector."""


def _smallest_even_at_least(k: int) -> int:
    k = max(k, 2)
    return k + (k % 2)


@dataclass(frozen=True)
class SemialgSystem:
    """``f_1 = ... = f_l = 0, f_{l+1} >= 0, ..., f_m >= 0`` and objective ``g``.

    Degree and height summaries are always recomputed from the
    polynomials.  ``d_override`` may raise ``d`` (it must stay even).
    ``original`` is set by :func:`compactify`; bound formulas are then
    evaluated with the original system's parameters.
    """

    equalities: tuple[IntPolynomial, ...]
    inequalities: tuple[IntPolynomial, ...]
    objective: IntPolynomial
    d_override: int | None = None
    names: tuple[str, ...] | None = None
    original: SemialgSystem | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "equalities", tuple(self.equalities))
        object.__setattr__(self, "inequalities", tuple(self.inequalities))
        n = self.objective.num_vars
        if n < 2:
            raise InvalidSystemError("need at least 2 variables")
        if not self.constraints:
            raise InvalidSystemError("need at least one constraint (m >= 1)")
        for k, f in enumerate(self.constraints, start=1):
            if f.num_vars != n:
                raise InvalidSystemError(f"constraint {k} has {f.num_vars} variables, expected {n}")
            if f.is_zero():
                raise InvalidSystemError(f"constraint {k} is the zero polynomial")
        if self.objective.is_zero():
            raise InvalidSystemError("objective is the zero polynomial")
        if self.names is None:
            object.__setattr__(self, "names", tuple(f"x{i + 1}" for i in range(n)))
        elif len(self.names) != n:
            raise InvalidSystemError("variable name count does not match polynomials")
        else:
            object.__setattr__(self, "names", tuple(self.names))
        if self.d_override is not None:
            d = self.d_override
            if d % 2:
                raise InvalidSystemError("d must be even")
            if d < self._observed_degree():
                raise InvalidSystemError(
                    f"d={d} is below the observed degree {self._observed_degree()}")

    def _observed_degree(self) -> int:
        return max([f.total_degree() for f in self.constraints]
                   + [self.objective.total_degree()])

    @property
    def constraints(self) -> tuple[IntPolynomial, ...]:
        return self.equalities + self.inequalities

    @property
    def n(self) -> int:
        return self.objective.num_vars

    @property
    def l(self) -> int:
        return len(self.equalities)

    @property
    def m(self) -> int:
        return len(self.equalities) + len(self.inequalities)

    @property
    def d(self) -> int:
        if self.d_override is not None:
            return self.d_override
        return _smallest_even_at_least(self._observed_degree())

    @property
    def d0(self) -> int:
        return self.objective.total_degree()

    @property
    def H0(self) -> int:
        return self.objective.height()

    @property
    def H(self) -> int:
        # H must dominate H0 as well as every constraint height
        return max([f.height() for f in self.constraints] + [self.H0])

    def bound_system(self) -> SemialgSystem:
        return self.original if self.original is not None else self

    def with_objective(self, g: IntPolynomial) -> SemialgSystem:
        return SemialgSystem(self.equalities, self.inequalities, g,
                             self.d_override, self.names, self.original)

    def is_feasible(self, pt: RationalPoint) -> bool:
        return (all(f.evaluate(pt) == 0 for f in self.equalities)
                and all(f.evaluate(pt) >= 0 for f in self.inequalities))


@dataclass(frozen=True)
class PerturbationMatrix:
    entries: tuple[tuple[int, ...], ...]
    prime_used: int

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.entries), len(self.entries[0])

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i][j]

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i]

    def singular_submatrices(self) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
        """Index sets of every square submatrix with zero determinant."""
        return [(ri, ci) for ri, ci, sub in square_submatrices(self.entries)
                if det_int(sub) == 0]


@dataclass(frozen=True)
class SubsetSelector:
    """Active set ``S`` (1-based constraint indices) with signs ``sigma`` (+1/-1)."""

    S: tuple[int, ...]
    sigma: tuple[int, ...]

    def __post_init__(self):
        if len(self.S) != len(self.sigma):
            raise InvalidSystemError("S and sigma must have equal length")
        if list(self.S) != sorted(set(self.S)):
            raise InvalidSystemError("S must be strictly increasing")
        if any(s not in (1, -1) for s in self.sigma):
            raise InvalidSystemError("sigma entries must be +1 or -1")

    @property
    def s(self) -> int:
        return len(self.S)

    def validate(self, sys: SemialgSystem) -> None:
        if self.s > sys.n:
            raise InvalidSystemError(f"#S = {self.s} exceeds n = {sys.n}")
        for i, sg in zip(self.S, self.sigma):
            if not 1 <= i <= sys.m:
                raise InvalidSystemError(f"constraint index {i} out of range 1..{sys.m}")
            if i > sys.l and sg != 1:
                raise InvalidSystemError(f"inequality index {i} must carry sign +")

    def label(self) -> str:
        if not self.S:
            return "S={}"
        inner = ",".join(f"{i}{'+' if s > 0 else '-'}" for i, s in zip(self.S, self.sigma))
        return "S={" + inner + "}"


@dataclass(frozen=True)
class ParamPolynomial:
    """A polynomial together with the name and role of every slot.

    Roles are ``"param"`` (t0, t, U), ``"x"`` (x0, x1..xn) and
    ``"lambda"`` (lam0, lam_i).
    """

    poly: IntPolynomial
    names: tuple[str, ...]
    roles: tuple[str, ...]
    label: str = ""

    def __post_init__(self):
        if not (len(self.names) == len(self.roles) == self.poly.num_vars):
            raise PolynomialError("slot metadata does not match the polynomial")

    def slots(self, role: str) -> list[int]:
        return [i for i, r in enumerate(self.roles) if r == role]

    def slot(self, name: str) -> int:
        return self.names.index(name)

    def degree_in(self, names: Sequence[str]) -> int:
        return self.poly.degree_in_group(self.slot(nm) for nm in names)


def is_prime(k: int) -> bool:
    if k < 2:
        return False
    f = 2
    while f * f <= k:
        if k % f == 0:
            return False
        f += 1
    return True


def bertrand_prime(n: int, m: int) -> int:
    """Smallest prime in ``[n+m+2, 2n+2m+1]``."""
    for p in range(n + m + 2, 2 * n + 2 * m + 2):
        if is_prime(p):
            return p
    raise AssertionError("Bertrand's postulate guarantees a prime in range")


def build_matrix_A(n: int, m: int) -> PerturbationMatrix:
    """Remainders mod p of the scaled Hilbert matrix ``(n+m+1)!/(i+j+1)``."""
    if n < 2 or m < 1:
        raise InvalidSystemError("need n >= 2 and m >= 1")
    p = bertrand_prime(n, m)
    scale = factorial(n + m + 1)
    rows = tuple(tuple((scale // (i + j + 1)) % p for j in range(n + 1))
                 for i in range(m + 1))
    return PerturbationMatrix(rows, p)


def _tilde(row: Sequence[int], n: int, d: int) -> IntPolynomial:
    if d % 2:
        raise InvalidSystemError("d must be even")
    terms = {(0,) * n: row[0]}
    for j in range(1, n + 1):
        mono = [0] * n
        mono[j - 1] = d
        terms[tuple(mono)] = row[j]
    return IntPolynomial(n, terms)


def tilde_constraint(i: int, A: PerturbationMatrix, n: int, d: int) -> IntPolynomial:
    """``sum_j a_ij x_j^d + a_i0`` for a constraint row ``1 <= i <= m``."""
    if not 1 <= i < A.shape[0]:
        raise InvalidSystemError(f"row {i} is not a constraint row")
    return _tilde(A.row(i), n, d)


def tilde_objective(A: PerturbationMatrix, n: int, d: int) -> IntPolynomial:
    return _tilde(A.row(0), n, d)


def _xnames(n: int) -> tuple[str, ...]:
    # internal slot names; user-facing names stay on SemialgSystem
    return tuple(f"x{j}" for j in range(1, n + 1))


def _lift(p: IntPolynomial, width: int, offset: int) -> IntPolynomial:
    return p.embed(width, list(range(offset, offset + p.num_vars)))


def perturbed_family(sys: SemialgSystem, A: PerturbationMatrix) -> list[ParamPolynomial]:
    """``F_i^+/-`` (both signs for equalities, + for inequalities) then ``G``.

    Slots are ``(t, x1..xn)``.
    """
    n, d = sys.n, sys.d
    names = ("t",) + _xnames(n)
    roles = ("param",) + ("x",) * n
    t = IntPolynomial.variable(0, n + 1)
    out = []
    for i, f in enumerate(sys.constraints, start=1):
        fl = _lift(f, n + 1, 1)
        ft = _lift(tilde_constraint(i, A, n, d), n + 1, 1)
        out.append(ParamPolynomial(fl + t * ft, names, roles, f"F{i}+"))
        if i <= sys.l:
            out.append(ParamPolynomial(fl - t * ft, names, roles, f"F{i}-"))
    g = _lift(sys.objective, n + 1, 1)
    gt = _lift(tilde_objective(A, n, d), n + 1, 1)
    out.append(ParamPolynomial(g + t * gt, names, roles, "G"))
    return out


def _diag_form(row: Sequence[int], n: int, d: int, width: int, offset: int) -> IntPolynomial:
    """``sum_{j=0}^n a_j x_j^d`` over slots ``offset..offset+n``."""
    terms = {}
    for j in range(n + 1):
        mono = [0] * width
        mono[offset + j] = d
        terms[tuple(mono)] = row[j]
    return IntPolynomial(width, terms)


def homogenized_constraint(sys: SemialgSystem, A: PerturbationMatrix, i: int,
                           sign: int) -> ParamPolynomial:
    """``t0*h(f_i)_d + sign*t*sum_j a_ij x_j^d`` over slots ``(t0, t, x0..xn)``."""
    n, d = sys.n, sys.d
    width = n + 3
    names = ("t0", "t", "x0") + _xnames(n)
    roles = ("param", "param") + ("x",) * (n + 1)
    t0 = IntPolynomial.variable(0, width)
    t = IntPolynomial.variable(1, width)
    hf = _lift(sys.constraints[i - 1].homogenize(d), width, 2)
    diag = _diag_form(A.row(i), n, d, width, 2)
    poly = t0 * hf + (t * diag).scale(sign)
    return ParamPolynomial(poly, names, roles, f"F{i}{'+' if sign > 0 else '-'}bar")


def homogenized_family(sys: SemialgSystem, A: PerturbationMatrix) -> list[ParamPolynomial]:
    out = []
    for i in range(1, sys.m + 1):
        out.append(homogenized_constraint(sys, A, i, 1))
        if i <= sys.l:
            out.append(homogenized_constraint(sys, A, i, -1))
    return out


def lagrange_family(sys: SemialgSystem, A: PerturbationMatrix,
                    sel: SubsetSelector) -> list[ParamPolynomial]:
    """The ``n`` forms ``Gbar_{S,sigma,j}``.

    Slots are ``(t0, t, x0..xn, lam0, lam_i for i in S)``.
    """
    sel.validate(sys)
    n, d = sys.n, sys.d
    s = sel.s
    width = n + 3 + s + 1
    names = (("t0", "t", "x0") + _xnames(n) + ("lam0",)
             + tuple(f"lam{i}" for i in sel.S))
    roles = ("param", "param") + ("x",) * (n + 1) + ("lambda",) * (s + 1)
    t0 = IntPolynomial.variable(0, width)
    t = IntPolynomial.variable(1, width)
    lam = [IntPolynomial.variable(n + 3 + k, width) for k in range(s + 1)]
    out = []
    for j in range(1, n + 1):
        dg = _lift(sys.objective.partial_derivative(j - 1).homogenize(d - 1), width, 2)
        unpert = lam[0] * dg
        coef = lam[0].scale(A[0, j])
        for k, (i, sg) in enumerate(zip(sel.S, sel.sigma), start=1):
            dfi = _lift(sys.constraints[i - 1].partial_derivative(j - 1).homogenize(d - 1),
                        width, 2)
            unpert = unpert - lam[k] * dfi
            coef = coef - lam[k].scale(sg * A[i, j])
        mono = [0] * width
        mono[2 + j] = d - 1
        xj = IntPolynomial(width, {tuple(mono): d})
        poly = t0 * unpert + t * xj * coef
        out.append(ParamPolynomial(poly, names, roles, f"G{j}bar"))
    return out


def u_polynomial(sys: SemialgSystem, objective: IntPolynomial | None = None) -> ParamPolynomial:
    """``U*x0^{d0} - h(g)_{d0}`` over slots ``(U, x0..xn)``.

    ``objective`` replaces ``g`` here only (e.g. a coordinate ``x_i``).
    """
    g = sys.objective if objective is None else objective
    n = sys.n
    d0 = g.total_degree()
    width = n + 2
    names = ("U", "x0") + _xnames(n)
    roles = ("param",) + ("x",) * (n + 1)
    mono = [0] * width
    mono[0] = 1
    mono[1] = d0
    poly = IntPolynomial(width, {tuple(mono): 1}) - _lift(g.homogenize(d0), width, 1)
    return ParamPolynomial(poly, names, roles, "P")


def ball_constraint(n: int, M: Fraction) -> IntPolynomial:
    """``(M+1)^2 - sum x_i^2`` scaled by the squared denominator of ``M``."""
    M = Fraction(M)
    p, q = M.numerator, M.denominator
    terms = {(0,) * n: (p + q) ** 2}
    for j in range(n):
        mono = [0] * n
        mono[j] = 2
        terms[tuple(mono)] = -q * q
    return IntPolynomial(n, terms)


def compactify(sys: SemialgSystem, M: Fraction | int) -> SemialgSystem:
    """Append the ball inequality; bounds keep using the original parameters."""
    M = Fraction(M)
    if M < 0:
        raise InvalidSystemError("ball radius M must be non-negative")
    ball = ball_constraint(sys.n, M)
    return SemialgSystem(sys.equalities, sys.inequalities + (ball,), sys.objective,
                         sys.d_override, sys.names, sys.bound_system())


def membership_T_t(sys: SemialgSystem, A: PerturbationMatrix, t: Fraction | int,
                   pt: RationalPoint) -> bool:
    """Membership in the relaxed set ``T_t`` (``T_0 = T``)."""
    t = Fraction(t)
    if t < 0:
        raise InvalidSystemError("t must be non-negative")
    n, d = sys.n, sys.d
    for i, f in enumerate(sys.constraints, start=1):
        fv = f.evaluate(pt)
        tv = tilde_constraint(i, A, n, d).evaluate(pt)
        if fv + t * tv < 0:
            return False
        if i <= sys.l and fv - t * tv > 0:
            return False
    return True

"""Parametric resultants, certificate polynomials and candidate minima.

The resultant of ``P; Fbar_i (i in S); Gbar_j (j = 1..n)`` is assembled
through its product-over-roots expansion.  For a fixed parameter value
``(t0, t) = (1, t*)`` the system ``{Fbar_i, Gbar_j}`` has finitely many
solutions, and with ``x0 = 1`` the U-dependent part of the resultant is
the characteristic polynomial of multiplication by ``g`` on the quotient
ring of that zero-dimensional system.  Each coefficient of this
polynomial is a rational function of ``t`` whose numerator and denominator
degrees are bounded by the ``(t0, t)``-degree ``s*M2 + n*M3``; sampling
``2*deg + 1`` parameter values pins it down exactly, and one more sample
confirms the reconstruction.  What is lost is a factor that does not
depend on ``U``; it changes ``Q`` by a nonzero integer only, so roots are
unaffected and the primitive ``Q`` returned here has height at most that
of the full one.
"""

from __future__ import annotations

import random
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from math import comb, gcd, lcm
from typing import Iterator, Sequence

from sympy import Poly, QQ, groebner, symbols
from sympy.polys.matrices import DomainMatrix

from . import bounds, linalg, roots
from .perturb import (
    PerturbationMatrix,
    ParamPolynomial,
    SemialgSystem,
    SubsetSelector,
    build_matrix_A,
    homogenized_constraint,
    lagrange_family,
    u_polynomial,
)
from .polycore import IntPolynomial


class BudgetExceeded(RuntimeError):
    """The instance is above the configured desk-scale limits."""


class DegenerateResultant(ArithmeticError):
    """The elimination could not be completed soundly; nothing is returned."""


class CeilingViolation(ArithmeticError):
    """A computed certificate broke a degree or height ceiling."""


@dataclass(frozen=True)
class Budget:
    max_matrix_dim: int = 3000
    max_points: int = 100_000
    # sample count times the cube of the quotient dimension
    max_work: int = 10 ** 10


# -- systems -----------------------------------------------------------------

@dataclass(frozen=True)
class ResultantSystem:
    """``P``, the ``s`` constraint forms and the ``n`` Lagrange forms of one ``(S, sigma)``."""

    objective_form: ParamPolynomial
    constraint_forms: tuple[ParamPolynomial, ...]
    lagrange_forms: tuple[ParamPolynomial, ...]
    selector: SubsetSelector
    n: int
    d: int

    def __post_init__(self):
        if len(self.lagrange_forms) != self.n:
            raise ValueError("need exactly n Lagrange forms")
        if len(self.constraint_forms) != self.selector.s:
            raise ValueError("need one constraint form per index in S")
        for form, (dx, dl) in zip(self.forms, self.bidegrees):
            xs = form.slots("x")
            ls = form.slots("lambda")
            if not form.poly.is_homogeneous_in(xs, dx):
                raise ValueError(f"{form.label} is not of degree {dx} in (x0, x)")
            if ls and not form.poly.is_homogeneous_in(ls, dl):
                raise ValueError(f"{form.label} is not of degree {dl} in (lam0, lam)")
            if not ls and dl:
                raise ValueError(f"{form.label} lacks Lagrange variables")
        params = {n for f in self.forms for n, r in zip(f.names, f.roles) if r == "param"}
        if not params <= {"t0", "t", "U"}:
            raise ValueError("parameter slots must be among (t0, t, U)")

    @classmethod
    def build(cls, sys: SemialgSystem, A: PerturbationMatrix, sel: SubsetSelector,
              objective: IntPolynomial | None = None) -> ResultantSystem:
        sel.validate(sys)
        P = u_polynomial(sys, objective)
        cons = tuple(homogenized_constraint(sys, A, i, sg) for i, sg in zip(sel.S, sel.sigma))
        target = sys if objective is None else sys.with_objective(objective)
        lag = tuple(lagrange_family(target, A, sel))
        return cls(P, cons, lag, sel, sys.n, sys.d)

    @property
    def s(self) -> int:
        return self.selector.s

    @property
    def d0(self) -> int:
        return self.objective_form.poly.degree_in_group(self.objective_form.slots("x"))

    @property
    def forms(self) -> tuple[ParamPolynomial, ...]:
        return (self.objective_form,) + self.constraint_forms + self.lagrange_forms

    @property
    def bidegrees(self) -> tuple[tuple[int, int], ...]:
        return ((self.d0, 0),) + ((self.d, 0),) * self.s + ((self.d - 1, 1),) * self.n

    def objective(self) -> IntPolynomial:
        """``g`` in ``x1..xn``, read back from ``P = U*x0^d0 - h(g)``."""
        P = self.objective_form.poly
        width = self.n + 2
        mono = [0] * width
        mono[0] = 1
        mono[1] = self.d0
        rest = P - IntPolynomial(width, {tuple(mono): 1})
        return (-rest).substitute_value(1, 1).drop_slot(0)

    def t_degree(self) -> int:
        return bounds.resultant_t_degree(self.n, self.s, self.d, self.d0)

    def bezout(self) -> tuple[int, int, int]:
        return bounds.bezout_numbers(self.n, self.s, self.d, self.d0)


@dataclass
class ParamResultant:
    """``R(t0, t, U)`` over slots ``(t0, t, U)``, optionally split as ``t^e * Rtilde``."""

    R: IntPolynomial
    degree: int
    selector: SubsetSelector
    e: int | None = None
    R_tilde: IntPolynomial | None = None

    @property
    def stripped(self) -> bool:
        return self.e is not None

    def u_degree(self) -> int:
        return self.R.degree_in(2)

    def is_homogeneous(self) -> bool:
        return self.R.is_homogeneous_in((0, 1), self.degree)


@dataclass(frozen=True)
class Ceilings:
    M1: int
    M_exact: int | None
    M_log2: tuple[Fraction, Fraction]

    def height_ok(self, h: int) -> bool:
        if self.M_exact is not None:
            return h <= self.M_exact
        return bounds.log2_enclosure(h)[1] <= self.M_log2[0]

    @classmethod
    def for_params(cls, params: bounds.BoundParams, exact_bits: int = 1 << 20) -> Ceilings:
        M1 = bounds.bezout_numbers(params.n, params.s, params.d, params.d0)[0]
        enc = bounds.coefficient_bound_M_log2(params)
        exact = bounds.coefficient_bound_M(params) if enc[1] <= exact_bits else None
        return cls(M1, exact, enc)


@dataclass
class CertificatePoly:
    coefficients: list[int]          # lowest degree first, primitive, positive leading
    selector: SubsetSelector
    ceilings: Ceilings
    e: int
    roots: list[tuple[Fraction, Fraction]] = field(default_factory=list)

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    @property
    def height(self) -> int:
        return max(abs(c) for c in self.coefficients)

    def as_dict(self) -> dict:
        return {
            "S": list(self.selector.S),
            "sigma": ["+" if x > 0 else "-" for x in self.selector.sigma],
            "coefficients": [str(c) for c in self.coefficients],
            "degree": self.degree,
            "height": str(self.height),
            "e": self.e,
            "ceilings": {
                "M1": self.ceilings.M1,
                "M": str(self.ceilings.M_exact) if self.ceilings.M_exact is not None else None,
                "log2_M": [str(v) for v in self.ceilings.M_log2],
            },
        }


@dataclass
class CandidateSet:
    certificates: list[CertificatePoly]
    intervals: list[tuple[Fraction, Fraction]]

    def owners(self, interval: tuple[Fraction, Fraction]) -> list[CertificatePoly]:
        return [c for c in self.certificates
                if any(roots.interval_meets(r, interval) for r in c.roots)]


# -- fibres at a parameter value ----------------------------------------------

def _expr(poly: IntPolynomial, syms) -> object:
    return Poly.from_dict(poly.terms, *syms, domain="ZZ").as_expr()


@dataclass
class _Fibres:
    """The system specialized at ``t0 = 1, x0 = 1`` and a chart on ``(lam0, lam)``."""

    t: object
    unknowns: tuple
    polys: list[Poly]
    g: Poly

    @classmethod
    def build(cls, rs: ResultantSystem, chart: Sequence[int]) -> _Fibres:
        n, s = rs.n, rs.s
        t0, t, x0 = symbols("t0 t x0")
        xs = symbols(f"x1:{n + 1}")
        lam0 = symbols("lam0")
        ls = symbols(f"l1:{s + 1}") if s else ()
        unknowns = tuple(xs) + tuple(ls)
        base = {t0: 1, x0: 1}
        # chart: lam0 + sum c_k lam_k = 1
        base_l = {**base, lam0: 1 - sum(c * l for c, l in zip(chart, ls))}
        polys = []
        for f in rs.constraint_forms:
            polys.append(Poly(_expr(f.poly, (t0, t, x0) + xs).subs(base), t, *unknowns, domain=QQ))
        for G in rs.lagrange_forms:
            e = _expr(G.poly, (t0, t, x0) + xs + (lam0,) + tuple(ls)).subs(base_l)
            polys.append(Poly(e, t, *unknowns, domain=QQ))
        g = Poly(_expr(rs.objective(), xs), *unknowns, domain=QQ)
        return cls(t, unknowns, polys, g)

    def charpoly(self, tval: int) -> tuple[int, list[Fraction]] | None:
        """``(dim, [1, c_{N-1}, ..., c_0])`` at ``t = tval``; ``None`` if not zero-dimensional."""
        specs = [p.eval(self.t, tval) for p in self.polys]
        specs = [p for p in specs if not p.is_zero]
        if not specs:
            return None
        G = groebner([p.as_expr() for p in specs], *self.unknowns, order="grevlex", domain=QQ)
        if G.exprs == [1]:
            return 0, [Fraction(1)]
        if not G.is_zero_dimensional:
            return None
        lead = [Poly(e, *self.unknowns).monoms(order="grevlex")[0] for e in G.exprs]
        std = _standard_monomials(lead, len(self.unknowns))
        index = {m: k for k, m in enumerate(std)}
        gx = self.g.as_expr()
        cols = []
        for mono in std:
            mexpr = Poly.from_dict({mono: 1}, *self.unknowns).as_expr()
            _, r = G.reduce(gx * mexpr)
            col = [QQ(0)] * len(std)
            if r != 0:
                for m, c in Poly(r, *self.unknowns, domain=QQ).terms():
                    col[index[m]] = c
            cols.append(col)
        N = len(std)
        rows = [[cols[j][i] for j in range(N)] for i in range(N)]
        cp = DomainMatrix(rows, (N, N), QQ).charpoly()
        return N, [Fraction(int(c.numerator), int(c.denominator)) for c in cp]


def _standard_monomials(lead: list[tuple[int, ...]], nvars: int) -> list[tuple[int, ...]]:
    def divisible(m):
        return any(all(a >= b for a, b in zip(m, l)) for l in lead)

    seen = {(0,) * nvars}
    if divisible((0,) * nvars):
        return []
    frontier = [(0,) * nvars]
    while frontier:
        nxt = []
        for m in frontier:
            for k in range(nvars):
                c = list(m)
                c[k] += 1
                c = tuple(c)
                if c not in seen and not divisible(c):
                    seen.add(c)
                    nxt.append(c)
        frontier = nxt
    return sorted(seen)


# -- rational reconstruction ---------------------------------------------------

def _rational_fit(ts: Sequence[int], vals: Sequence[Fraction], D: int) -> tuple[list[Fraction], list[Fraction]]:
    """``(num, den)`` of degree <= D agreeing with ``vals`` on ``ts`` (needs ``len(ts) >= 2D+1``)."""
    if all(v == vals[0] for v in vals):
        return [vals[0]], [Fraction(1)]
    rows = []
    for tv, v in zip(ts, vals):
        pw = [Fraction(tv) ** k for k in range(D + 1)]
        rows.append([QQ(p.numerator, p.denominator) for p in pw]
                    + [QQ((-v * p).numerator, (-v * p).denominator) for p in pw])
    M = DomainMatrix(rows, (len(rows), 2 * D + 2), QQ)
    ker = M.nullspace().to_Matrix()
    if ker.rows == 0:
        raise DegenerateResultant("no rational function of the stated degree fits the samples")
    vec = [Fraction(int(QQ.convert(x).numerator), int(QQ.convert(x).denominator)) for x in ker.row(0)]
    num, den = vec[:D + 1], vec[D + 1:]
    u = symbols("u")
    pn = Poly(list(reversed([QQ(c.numerator, c.denominator) for c in num])), u, domain=QQ)
    pd = Poly(list(reversed([QQ(c.numerator, c.denominator) for c in den])), u, domain=QQ)
    if pd.is_zero:
        raise DegenerateResultant("rational reconstruction produced a zero denominator")
    g = pn.gcd(pd)
    pn, pd = pn.exquo(g), pd.exquo(g)
    lc = pd.LC()
    pn, pd = pn.quo_ground(lc), pd.quo_ground(lc)
    return _poly_to_fracs(pn), _poly_to_fracs(pd)


def _poly_to_fracs(p: Poly) -> list[Fraction]:
    return [Fraction(int(c.numerator), int(c.denominator)) for c in reversed(p.all_coeffs())]


def _eval_fracs(c: Sequence[Fraction], x: Fraction) -> Fraction:
    acc = Fraction(0)
    for v in reversed(c):
        acc = acc * x + v
    return acc


def _mul_fracs(a: Sequence[Fraction], b: Sequence[Fraction]) -> list[Fraction]:
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _lcm_polys(polys: list[list[Fraction]]) -> list[Fraction]:
    u = symbols("u")
    acc = Poly(1, u, domain=QQ)
    for c in polys:
        p = Poly(list(reversed([QQ(v.numerator, v.denominator) for v in c])), u, domain=QQ)
        acc = acc.lcm(p)
    acc = acc.quo_ground(acc.LC())
    return _poly_to_fracs(acc)


def _exact_div_fracs(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    u = symbols("u")
    pa = Poly(list(reversed([QQ(v.numerator, v.denominator) for v in a])), u, domain=QQ)
    pb = Poly(list(reversed([QQ(v.numerator, v.denominator) for v in b])), u, domain=QQ)
    return _poly_to_fracs(pa.exquo(pb))


# -- resultant -----------------------------------------------------------------

def _chart_candidates(s: int, seed: int = 20240917) -> Iterator[tuple[int, ...]]:
    rng = random.Random(seed)
    while True:
        yield tuple(rng.randint(1, 97) for _ in range(s))


def check_budget(rs: ResultantSystem, budget: Budget) -> None:
    M1 = rs.bezout()[0]
    D = rs.t_degree()
    points = 2 * D + 2
    if M1 > budget.max_matrix_dim:
        raise BudgetExceeded(f"{rs.selector.label()}: quotient dimension up to {M1} exceeds "
                             f"the matrix limit {budget.max_matrix_dim}")
    if points > budget.max_points:
        raise BudgetExceeded(f"{rs.selector.label()}: {points} interpolation points exceed "
                             f"the grid limit {budget.max_points}")
    if points * M1 ** 3 > budget.max_work:
        raise BudgetExceeded(f"{rs.selector.label()}: estimated work {points * M1 ** 3} "
                             f"(points {points} x dimension {M1}^3) exceeds {budget.max_work}")


def multihomog_resultant(rs: ResultantSystem, budget: Budget = Budget()) -> ParamResultant:
    """``R(t0, t, U)``, exact in its ``U``-dependence, homogeneous of degree ``s*M2 + n*M3``."""
    check_budget(rs, budget)
    D = rs.t_degree()
    M1 = rs.bezout()[0]
    need = 2 * D + 2
    charts = _chart_candidates(rs.s)
    fib = _Fibres.build(rs, next(charts))
    if rs.s:
        # a solution on the chart's hyperplane would be lost; a second chart must agree
        probe = 2 * D + 3
        first = fib.charpoly(probe)
        for _ in range(8):
            alt = _Fibres.build(rs, next(charts))
            second = alt.charpoly(probe)
            if first is not None and second is not None and first[0] == second[0]:
                break
            if second is not None and (first is None or second[0] > first[0]):
                fib, first = alt, second
        else:
            raise DegenerateResultant("no pair of Lagrange charts agree on the fibre size")

    samples: dict[int, tuple[int, list[Fraction]]] = {}
    tval = 0
    limit = 4 * need + 40
    while True:
        tval += 1
        if tval > limit:
            raise DegenerateResultant("too few regular parameter values")
        res = fib.charpoly(tval)
        if res is not None:
            samples[tval] = res
        if len(samples) >= need:
            N = Counter(v[0] for v in samples.values()).most_common(1)[0][0]
            good = [k for k, v in samples.items() if v[0] == N]
            if len(good) >= need:
                break
    if N > M1:
        raise CeilingViolation(f"fibre has {N} solutions, above the Bezout number {M1}")
    good = good[:need]
    fit_ts, check_t = good[:-1], good[-1]
    nums, dens = [], []
    for j in range(1, N + 1):
        vals = [samples[k][1][j] for k in fit_ts]
        num, den = _rational_fit(fit_ts, vals, D)
        if _eval_fracs(num, Fraction(check_t)) != samples[check_t][1][j] * _eval_fracs(den, Fraction(check_t)):
            raise DegenerateResultant("reconstructed coefficient fails the check sample")
        nums.append(num)
        dens.append(den)
    L = _lcm_polys(dens) if dens else [Fraction(1)]
    # coefficient of U^(N-j) is L * num_j / den_j; U^N carries L
    cols = {N: L}
    for j, (num, den) in enumerate(zip(nums, dens), start=1):
        cols[N - j] = _mul_fracs(_exact_div_fracs(L, den), num)
    den_lcm = 1
    for c in cols.values():
        for v in c:
            den_lcm = lcm(den_lcm, v.denominator)
    terms: dict[tuple[int, int], int] = {}
    for ue, c in cols.items():
        for te, v in enumerate(c):
            if v:
                terms[(te, ue)] = int(v * den_lcm)
    content = 0
    for v in terms.values():
        content = gcd(content, v)
    deg_t = max(te for te, _ in terms)
    if deg_t > D:
        raise CeilingViolation(f"t-degree {deg_t} exceeds the homogeneity degree {D}")
    R = IntPolynomial(3, {(D - te, te, ue): v // content for (te, ue), v in terms.items()})
    return ParamResultant(R, D, rs.selector)


def strip_t_power(pr: ParamResultant) -> ParamResultant:
    """Split ``R = t^e * Rtilde`` with ``t`` not dividing ``Rtilde``; idempotent."""
    if pr.R.is_zero():
        raise DegenerateResultant("cannot strip the zero polynomial")
    if pr.stripped:
        return pr
    e = min(m[1] for m in pr.R.terms)
    tilde = IntPolynomial(3, {(a, b - e, c): v for (a, b, c), v in pr.R.terms.items()})
    return ParamResultant(pr.R, pr.degree, pr.selector, e, tilde)


def q_poly(pr: ParamResultant, ceilings: Ceilings) -> CertificatePoly:
    """``Q(U) = Rtilde(1, 0, U)``, primitive with positive leading coefficient; ceilings enforced."""
    if not pr.stripped:
        raise ValueError("strip the t-power first")
    coeffs: dict[int, int] = {}
    for (a, b, c), v in pr.R_tilde.terms.items():
        if b == 0:
            coeffs[c] = coeffs.get(c, 0) + v
    Q = roots.trim([coeffs.get(k, 0) for k in range(max(coeffs, default=-1) + 1)])
    if not Q:
        raise DegenerateResultant("certificate polynomial vanished identically")
    Q = roots.primitive(Q)
    if Q[-1] < 0:
        Q = [-c for c in Q]
    cert = CertificatePoly(Q, pr.selector, ceilings, pr.e)
    if cert.degree > ceilings.M1:
        raise CeilingViolation(f"deg Q = {cert.degree} exceeds M1 = {ceilings.M1}")
    if not ceilings.height_ok(cert.height):
        raise CeilingViolation("height of Q exceeds the coefficient bound")
    cert.roots = roots.isolate_real_roots(Q) if cert.degree > 0 else []
    return cert


# -- enumeration ------------------------------------------------------------------

def selector_pairs(sys: SemialgSystem) -> list[SubsetSelector]:
    """All ``(S, sigma)`` with ``#S <= min(n, m)``; sign choice only on equalities."""
    out = []
    for s in range(0, min(sys.n, sys.m) + 1):
        for S in combinations(range(1, sys.m + 1), s):
            choices = [(1, -1) if i <= sys.l else (1,) for i in S]
            for sigma in product(*choices):
                out.append(SubsetSelector(S, sigma))
    return out


def certificate_for(sys: SemialgSystem, A: PerturbationMatrix, sel: SubsetSelector,
                    budget: Budget = Budget(),
                    objective: IntPolynomial | None = None) -> CertificatePoly:
    rs = ResultantSystem.build(sys, A, sel, objective)
    src = sys.bound_system()
    g = src.objective if objective is None else objective
    params = bounds.BoundParams(src.n, src.m, src.d, g.total_degree(),
                                max(src.H, g.height()), g.height(), src.l, sel.s)
    pr = strip_t_power(multihomog_resultant(rs, budget))
    return q_poly(pr, Ceilings.for_params(params))


def _certificate_job(args):
    return certificate_for(*args)


def candidate_minima(sys: SemialgSystem, A: PerturbationMatrix | None = None,
                     budget: Budget = Budget(), jobs: int = 1,
                     objective: IntPolynomial | None = None) -> CandidateSet:
    """Certificates for every admissible ``(S, sigma)`` and the isolated real roots of their product."""
    if A is None:
        A = build_matrix_A(sys.n, sys.m)
    sels = selector_pairs(sys)
    # refuse up front rather than after hours of partial work
    for sel in sels:
        check_budget(ResultantSystem.build(sys, A, sel, objective), budget)
    args = [(sys, A, sel, budget, objective) for sel in sels]
    if jobs > 1 and len(args) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            certs = list(pool.map(_certificate_job, args))
    else:
        certs = [_certificate_job(a) for a in args]
    prod = [1]
    for c in certs:
        if c.degree > 0:
            prod = _mul_int(prod, roots.squarefree_part(c.coefficients))
    intervals = roots.isolate_real_roots(prod) if len(prod) > 1 else []
    return CandidateSet(certs, intervals)


def _mul_int(a: Sequence[int], b: Sequence[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


# -- the limit system at (t0, t) = (0, 1) --------------------------------------------

@dataclass
class JCase:
    J: tuple[int, ...]
    case: str                      # "too-many-zeros", "too-few-zeros" or "balanced"
    consistent: bool               # the exact-linear-algebra argument went through
    affine_solutions: int          # 0 unless balanced
    detail: str = ""


@dataclass
class LimitSystemReport:
    n: int
    s: int
    d: int
    cases: list[JCase]
    groebner_dimension: int | None  # affine multiplicity count with x0 = 1
    M1: int
    none_at_infinity: bool

    @property
    def ok(self) -> bool:
        return (all(c.consistent for c in self.cases)
                and self.none_at_infinity
                and self.groebner_dimension == self.M1)


def limit_system_solutions(A: PerturbationMatrix, S: Sequence[int], sigma: Sequence[int],
                           n: int, d: int, max_n: int = 4) -> LimitSystemReport:
    """Case analysis over the zero pattern ``J = {j : x_j = 0}`` of the ``(0, 1)``-limit system,
    cross-checked by a Groebner count of its affine solutions."""
    s = len(S)
    if s > n:
        raise ValueError("need #S <= n")
    if n > max_n:
        raise BudgetExceeded(f"limit-system check limited to n <= {max_n}")
    cases = []
    for k in range(n + 1):
        for J in combinations(range(1, n + 1), k):
            K = [j for j in range(1, n + 1) if j not in J]
            # F-part: s equations in the y = x^d values on {0} + K
            ymat = [[A[i, j] for j in [0] + K] for i in S]
            # lambda-part: one equation per nonzero coordinate
            lmat = [[A[0, j]] + [-sg * A[i, j] for i, sg in zip(S, sigma)] for j in K]
            if len(J) > n - s:
                # only reachable with s >= 1, so ymat has rows
                ok = linalg.rank(ymat) == len(K) + 1
                cases.append(JCase(J, "too-many-zeros", ok, 0,
                                   "F-part has only the zero solution on {0} u K"))
            elif len(J) < n - s:
                ok = linalg.rank(lmat) == s + 1
                cases.append(JCase(J, "too-few-zeros", ok, 0,
                                   "Lagrange part forces all multipliers to vanish"))
            else:
                lk = linalg.nullspace(lmat, s + 1) if lmat else [[Fraction(1)] * (s + 1)]
                yk = linalg.nullspace(ymat, len(K) + 1) if ymat else [[Fraction(1)]]
                ok = len(lk) == 1 and len(yk) == 1 and all(v != 0 for v in yk[0])
                count = d ** len(K) if ok else 0
                cases.append(JCase(J, "balanced", ok, count,
                                   "unique multiplier, y0 != 0, each x_j^d fixed and nonzero"))
    dim, at_inf = _limit_groebner(A, S, sigma, n, d)
    M1 = comb(n, s) * d ** s * (d - 1) ** (n - s)
    return LimitSystemReport(n, s, d, cases, dim, M1, at_inf)


def _limit_groebner(A, S, sigma, n, d) -> tuple[int | None, bool]:
    s = len(S)
    x0 = symbols("x0")
    xs = symbols(f"x1:{n + 1}")
    lam = symbols(f"lam0:{s + 1}")
    allx = (x0,) + tuple(xs)

    def system(xsub, lsub):
        eqs = [sum(A[i, j] * allx[j] ** d for j in range(n + 1)) for i in S]
        for j in range(1, n + 1):
            c = A[0, j] * lam[0] - sum(sg * A[i, j] * lam[k] for k, (i, sg) in enumerate(zip(S, sigma), 1))
            eqs.append(d * allx[j] ** (d - 1) * c)
        return [e.subs(xsub).subs(lsub) for e in eqs]

    # multiplier chart: the unique multiplier per J may sit on any coordinate hyperplane
    weights = [1] + [k + 2 for k in range(s)]
    chart = {lam[0]: (1 - sum(w * l for w, l in zip(weights[1:], lam[1:])))}
    free_l = lam[1:]
    eqs = system({x0: 1}, chart)
    G = groebner([e for e in eqs if e != 0], *xs, *free_l, order="grevlex", domain=QQ)
    dim = None
    if G.exprs != [1] and G.is_zero_dimensional:
        lead = [Poly(e, *xs, *free_l).monoms(order="grevlex")[0] for e in G.exprs]
        dim = len(_standard_monomials(lead, n + s))
    elif G.exprs == [1]:
        dim = 0
    # x0 = 0: cover P^n x P^s by the charts x_k = 1, lam_r = 1
    none_at_inf = True
    for k in range(1, n + 1):
        for r in range(s + 1):
            sub = {x0: 0, xs[k - 1]: 1}
            eqs = [e for e in system(sub, {lam[r]: 1}) if e != 0]
            unknowns = [x for x in xs if x != xs[k - 1]] + [l for q, l in enumerate(lam) if q != r]
            if not eqs or groebner(eqs, *unknowns, order="grevlex", domain=QQ).exprs != [1]:
                none_at_inf = False
    return dim, none_at_inf

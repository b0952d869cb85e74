"""Independent ground truth for small instances.

``reference_minimum`` encloses the minimum of the objective over the
component designated by a seed point:

* adaptive subdivision of the box down to the requested resolution keeps
  every cell on which the constraints may hold (exact interval ranges);
* the cells reachable from the seed through shared faces, edges or corners
  form the component region;
* best-first branch and bound bisects the widest axis, bounding the
  objective from below by ``inf (g - sum w_i f_i)`` over the cell with
  multipliers fitted at the cell centre (``w >= 0`` on inequalities);
* the upper end comes from a polished KKT point whose nearby exact
  feasible point is certified by a Krawczyk test.

Both ends are rigorous; only the component designation is approximate.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Sequence

import numpy as np
from gmpy2 import mpq

from .bounds import PowerExpr
from .intervals import (CompiledPoly, Iv, isqrt_enclosure, krawczyk, krawczyk_contract,
                        lagrangian_range, to_fraction, to_mpq)
from .perturb import SemialgSystem
from .polycore import IntPolynomial

RationalPoint = tuple[Fraction, ...]

# multipliers are rounded to this dyadic grid before exact use
_WEIGHT_BITS = 40
_DEFAULT_WIDTH = Fraction(1, 2 ** 20)


class OracleError(ValueError):
    """The oracle cannot run on this input."""


class InfeasibleSeed(OracleError):
    pass


class NoFeasibleCell(OracleError):
    pass


class OracleBudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class OracleBudget:
    max_cells: int = 400_000


@dataclass(frozen=True)
class ComponentSpec:
    seed: RationalPoint
    box: tuple[tuple[Fraction, Fraction], ...]
    resolution: int = 16

    def __post_init__(self):
        object.__setattr__(self, "seed", tuple(Fraction(v) for v in self.seed))
        object.__setattr__(self, "box", tuple((Fraction(a), Fraction(b)) for a, b in self.box))
        if len(self.seed) != len(self.box):
            raise OracleError("seed and box dimensions differ")
        for v, (a, b) in zip(self.seed, self.box):
            if not a < b:
                raise OracleError("box sides must have positive length")
            if not a <= v <= b:
                raise InfeasibleSeed("seed lies outside the box")
        if self.resolution < 1:
            raise OracleError("resolution must be positive")

    def check(self, sys: SemialgSystem) -> None:
        if len(self.seed) != sys.n:
            raise OracleError("seed dimension does not match the system")
        if not sys.is_feasible(self.seed):
            raise InfeasibleSeed("constraints do not hold exactly at the seed")

    @staticmethod
    def product(a: ComponentSpec, b: ComponentSpec) -> ComponentSpec:
        return ComponentSpec(a.seed + b.seed, a.box + b.box, max(a.resolution, b.resolution))


@dataclass
class Enclosure:
    lo: Fraction
    hi: Fraction
    witness: RationalPoint
    certified: bool           # hi is backed by an exact or Krawczyk-certified feasible point
    residual: Fraction        # largest constraint violation at the witness
    cells: int = 0
    notes: list[str] = field(default_factory=list)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def contains(self, x: Fraction) -> bool:
        return self.lo <= x <= self.hi

    def as_dict(self) -> dict:
        return {
            "lo": _q(self.lo),
            "hi": _q(self.hi),
            "width": _q(self.width),
            "witness": [_q(v) for v in self.witness],
            "certified": self.certified,
            "residual": _q(self.residual),
            "cells": self.cells,
            "notes": list(self.notes),
        }


def _q(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


# -- compiled problem -----------------------------------------------------------

class _Problem:
    def __init__(self, eqs: Sequence[IntPolynomial], ineqs: Sequence[IntPolynomial],
                 obj: IntPolynomial, floor: mpq | None = None):
        self.n = obj.num_vars
        # a known global lower bound on the objective (0 for sums of squares)
        self.floor = floor
        self.eqs = [CompiledPoly(f) for f in eqs]
        self.ineqs = [CompiledPoly(f) for f in ineqs]
        self.obj = CompiledPoly(obj)

    @classmethod
    def of(cls, sys: SemialgSystem) -> _Problem:
        return cls(sys.equalities, sys.inequalities, sys.objective)

    def possibly_feasible(self, box) -> bool:
        for f in self.eqs:
            r = f.over(box)
            if r.lo > 0 or r.hi < 0:
                return False
        for f in self.ineqs:
            if f.over(box).hi < 0:
                return False
        for f in self.eqs:
            r = f.centered(box)
            if r.lo > 0 or r.hi < 0:
                return False
        return True

    def exactly_feasible(self, pt) -> bool:
        return all(f.at(pt) == 0 for f in self.eqs) and all(f.at(pt) >= 0 for f in self.ineqs)

    def residual(self, pt) -> Fraction:
        r = mpq(0)
        for f in self.eqs:
            r = max(r, abs(f.at(pt)))
        for f in self.ineqs:
            r = max(r, -f.at(pt))
        return to_fraction(r)

    def lower_bound(self, box) -> mpq | None:
        """Lower bound on the objective over feasible points of ``box``; ``None`` if there are none."""
        lb = self._lower_bound(box)
        if lb is None or self.floor is None:
            return lb
        return max(lb, self.floor)

    def _lower_bound(self, box) -> mpq | None:
        if len(self.eqs) == self.n:
            box = krawczyk_contract(self.eqs, box)
            if box is None or any(f.over(box).hi < 0 for f in self.ineqs):
                return None
        c = [float(b.mid) for b in box]
        cons = list(self.eqs)
        signs = [0] * len(self.eqs)
        for f in self.ineqs:
            if f.over(box).lo <= 0:
                cons.append(f)
                signs.append(1)
        if not cons:
            return self.obj.centered(box).lo
        w = _fit_multipliers(self.obj, cons, signs, c)
        return lagrangian_range(self.obj, cons, w, box).lo


def _fit_multipliers(obj, cons, signs, c) -> list[mpq]:
    g = np.array([d.atf(c) for d in obj.gradient])
    J = np.array([[d.atf(c) for d in f.gradient] for f in cons])
    keep = list(range(len(cons)))
    w = np.zeros(len(cons))
    for _ in range(len(cons) + 1):
        if not keep:
            break
        sol, *_ = np.linalg.lstsq(J[keep].T, g, rcond=None)
        bad = [k for k, v in zip(keep, sol) if signs[k] and v < 0]
        if not bad:
            w = np.zeros(len(cons))
            w[keep] = sol
            break
        keep = [k for k in keep if k not in bad]
    scale = 1 << _WEIGHT_BITS
    out = []
    for k, v in enumerate(w):
        if not np.isfinite(v):
            v = 0.0
        q = mpq(int(round(v * scale)), scale)
        if signs[k] and q < 0:
            q = mpq(0)
        out.append(q)
    return out


# -- local polishing and certification --------------------------------------------

def _newton_kkt(prob: _Problem, active: list[CompiledPoly], x0: Sequence[float],
                iters: int = 60) -> np.ndarray | None:
    n, k = prob.n, len(active)
    x = np.array(x0, dtype=float)
    J = np.array([[d.atf(x) for d in f.gradient] for f in active]).reshape(k, n)
    g = np.array([d.atf(x) for d in prob.obj.gradient])
    lam = np.linalg.lstsq(J.T, g, rcond=None)[0] if k else np.zeros(0)
    hess_obj = [[dd for dd in d.gradient] for d in prob.obj.gradient]
    hess_con = [[[dd for dd in d.gradient] for d in f.gradient] for f in active]

    def residual(x, lam):
        J = np.array([[d.atf(x) for d in f.gradient] for f in active]).reshape(k, n)
        g = np.array([d.atf(x) for d in prob.obj.gradient])
        r1 = g - J.T @ lam if k else g
        r2 = np.array([f.atf(x) for f in active])
        return np.concatenate([r1, r2]), J

    r, J = residual(x, lam)
    for _ in range(iters):
        H = np.array([[h.atf(x) for h in row] for row in hess_obj])
        for c in range(k):
            H -= lam[c] * np.array([[h.atf(x) for h in row] for row in hess_con[c]])
        top = np.hstack([H, -J.T]) if k else H
        bot = np.hstack([J, np.zeros((k, k))])
        M = np.vstack([top, bot]) if k else top
        step = np.linalg.lstsq(M, -r, rcond=None)[0]
        t = 1.0
        norm0 = np.linalg.norm(r)
        while t > 1e-6:
            xn = x + t * step[:n]
            ln = lam + t * step[n:]
            rn, Jn = residual(xn, ln)
            if np.all(np.isfinite(rn)) and np.linalg.norm(rn) < norm0 or norm0 < 1e-14:
                break
            t /= 2
        x, lam, r, J = xn, ln, rn, Jn
        if np.linalg.norm(r) < 1e-15:
            break
    if not np.all(np.isfinite(x)):
        return None
    return x


def _pick_columns(J: np.ndarray) -> list[int] | None:
    """Column subset making the active Jacobian square and well conditioned."""
    k, n = J.shape
    A = J.copy()
    cols = []
    rows = list(range(k))
    avail = list(range(n))
    for _ in range(k):
        best = None
        for r in rows:
            for c in avail:
                if best is None or abs(A[r, c]) > abs(A[best[0], best[1]]):
                    best = (r, c)
        if best is None or abs(A[best]) < 1e-12:
            return None
        r, c = best
        cols.append(c)
        for rr in rows:
            if rr != r:
                A[rr] -= A[rr, c] / A[r, c] * A[r]
        rows.remove(r)
        avail.remove(c)
    return sorted(cols)


def _certify(prob: _Problem, x: np.ndarray, active_idx: list[int]) -> tuple[mpq, list[mpq]] | None:
    """Upper bound ``sup g`` over a box certified to hold a feasible point near ``x``."""
    pt = [mpq(float(v)) for v in x]
    if prob.exactly_feasible(pt):
        return prob.obj.at(pt), pt
    cons = prob.eqs + prob.ineqs
    active = [cons[i] for i in active_idx]
    if not active or len(active) > prob.n:
        return None
    J = np.array([[d.atf(x) for d in f.gradient] for f in active])
    cols = _pick_columns(J)
    if cols is None:
        return None
    inactive = [f for i, f in enumerate(cons) if i not in active_idx and i >= len(prob.eqs)]
    for bits in (50, 40, 30, 24):
        r = mpq(1, 1 << bits)
        box = [Iv(pt[j] - r, pt[j] + r) if j in cols else Iv(pt[j]) for j in range(prob.n)]
        if not krawczyk(active, cols, box, pt):
            continue
        if any(f.over(box).lo < 0 for f in inactive):
            return None
        return prob.obj.over(box).hi, pt
    return None


def _polish(prob: _Problem, box) -> tuple[mpq, list[mpq]] | None:
    c = [float(b.mid) for b in box]
    ne = len(prob.eqs)
    near = [ne + i for i, f in enumerate(prob.ineqs) if f.over(box).lo <= 0]
    tried = []
    for extra in (near, []):
        idx = list(range(ne)) + extra
        if idx in tried:
            continue
        tried.append(idx)
        cons = prob.eqs + prob.ineqs
        x = _newton_kkt(prob, [cons[i] for i in idx], c)
        if x is None:
            continue
        got = _certify(prob, x, idx)
        if got is not None:
            return got
    return None


# -- scan and component region --------------------------------------------------------

def _cell_box(comp_box, level: int, idx: Sequence[int]):
    k = 1 << level
    out = []
    for (a, b), i in zip(comp_box, idx):
        a, b = to_mpq(a), to_mpq(b)
        h = (b - a) / k
        out.append(Iv(a + h * i, a + h * (i + 1)))
    return out


def _scan(prob: _Problem, comp: ComponentSpec, budget: OracleBudget) -> tuple[int, set]:
    level = max(0, (comp.resolution - 1).bit_length())
    n = len(comp.box)
    cells = {(0,) * n}
    seen = 1
    for lv in range(1, level + 1):
        nxt = set()
        for idx in cells:
            for bits in product((0, 1), repeat=n):
                child = tuple(2 * i + b for i, b in zip(idx, bits))
                seen += 1
                if seen > budget.max_cells:
                    raise OracleBudgetExceeded(f"grid scan exceeded {budget.max_cells} cells")
                if prob.possibly_feasible(_cell_box(comp.box, lv, child)):
                    nxt.add(child)
        cells = nxt
    return level, cells


def _region(cells: set, level: int, comp: ComponentSpec) -> list:
    n = len(comp.box)
    k = 1 << level
    start = []
    for idx in cells:
        box = _cell_box(comp.box, level, idx)
        if all(b.contains(to_mpq(v)) for b, v in zip(box, comp.seed)):
            start.append(idx)
    if not start:
        raise NoFeasibleCell("no possibly-feasible cell contains the seed")
    deltas = [d for d in product((-1, 0, 1), repeat=n) if any(d)]
    reached = set(start)
    stack = list(start)
    while stack:
        idx = stack.pop()
        for d in deltas:
            nb = tuple(i + e for i, e in zip(idx, d))
            if nb in cells and nb not in reached and all(0 <= v < k for v in nb):
                reached.add(nb)
                stack.append(nb)
    return sorted(reached)


# -- main entry points ------------------------------------------------------------------

def reference_minimum(sys: SemialgSystem, comp: ComponentSpec,
                      target_width: Fraction = _DEFAULT_WIDTH,
                      budget: OracleBudget = OracleBudget()) -> Enclosure:
    """Rigorous enclosure of the minimum of the objective over the seeded component."""
    comp.check(sys)
    return _minimize(_Problem.of(sys), comp, Fraction(target_width), budget)


def _minimize(prob: _Problem, comp: ComponentSpec, target: Fraction,
              budget: OracleBudget) -> Enclosure:
    target_q = to_mpq(target)
    level, cells = _scan(prob, comp, budget)
    region = _region(cells, level, comp)
    seed = [to_mpq(v) for v in comp.seed]
    hi = prob.obj.at(seed)
    witness = seed
    certified = True
    heap = []
    counter = 0
    for idx in region:
        box = _cell_box(comp.box, level, idx)
        lb = prob.lower_bound(box)
        if lb is not None and lb <= hi:
            heap.append((lb, counter, box))
            counter += 1
    heapq.heapify(heap)
    processed = len(region)
    pops = 0
    next_polish = 1
    lo = hi
    while heap:
        lb, _, box = heap[0]
        lo = min(lb, hi)
        if hi - lo <= target_q:
            break
        heapq.heappop(heap)
        pops += 1
        if pops >= next_polish:
            next_polish *= 2
            got = _polish(prob, box)
            if got is not None and got[0] < hi:
                hi, witness = got
        if lb > hi:
            continue
        widths = [b.width for b in box]
        ax = max(range(len(box)), key=lambda j: (widths[j], -j))
        m = box[ax].mid
        for half in (Iv(box[ax].lo, m), Iv(m, box[ax].hi)):
            child = list(box)
            child[ax] = half
            processed += 1
            if processed > budget.max_cells:
                raise OracleBudgetExceeded(f"branch and bound exceeded {budget.max_cells} cells")
            if not prob.possibly_feasible(child):
                continue
            clb = prob.lower_bound(child)
            if clb is not None and clb <= hi:
                heapq.heappush(heap, (clb, counter, child))
                counter += 1
    else:
        lo = hi
    g_w = prob.obj.at(witness)
    lo = min(lo, g_w)
    return Enclosure(to_fraction(lo), to_fraction(hi), tuple(to_fraction(v) for v in witness),
                     certified, prob.residual(witness), processed)


@dataclass
class KKTPoint:
    S: tuple[int, ...]
    sigma: tuple[int, ...]
    point: tuple[float, ...]
    value: float
    feasible: bool


def enumerate_kkt(sys: SemialgSystem, comp: ComponentSpec, samples_per_axis: int = 7,
                  tol: float = 1e-9) -> list[KKTPoint]:
    """Critical points of the objective restricted to ``{f_i = 0, i in S}`` for every ``S``.

    At ``t = 0`` the conditions do not depend on the sign choice, so each
    ``S`` is reported once with all-plus signs.
    """
    prob = _Problem.of(sys)
    cons = prob.eqs + prob.ineqs
    n, m = sys.n, sys.m
    grid = [np.linspace(float(a), float(b), samples_per_axis) for a, b in comp.box]
    out: list[KKTPoint] = []
    for s in range(0, min(n, m) + 1):
        for S in combinations(range(1, m + 1), s):
            active = [cons[i - 1] for i in S]
            found: list[np.ndarray] = []
            for start in product(*grid):
                x = _newton_kkt(prob, active, start, iters=40)
                if x is None:
                    continue
                if any(abs(f.atf(x)) > tol for f in active):
                    continue
                if not _rank_deficient(prob, active, x, tol=1e-7):
                    continue
                if not all(float(a) - tol <= v <= float(b) + tol for v, (a, b) in zip(x, comp.box)):
                    continue
                if any(np.linalg.norm(x - y) < 1e-7 for y in found):
                    continue
                found.append(x)
            for x in sorted(found, key=lambda v: tuple(v)):
                feas = (all(abs(f.atf(x)) <= tol for f in prob.eqs)
                        and all(f.atf(x) >= -tol for f in prob.ineqs))
                out.append(KKTPoint(S, (1,) * s, tuple(float(v) for v in x),
                                    prob.obj.atf(x), feas))
    return out


def _rank_deficient(prob: _Problem, active, x, tol: float) -> bool:
    rows = [[d.atf(x) for d in prob.obj.gradient]] + [[d.atf(x) for d in f.gradient] for f in active]
    M = np.array(rows)
    sv = np.linalg.svd(M, compute_uv=False)
    scale = max(1.0, float(np.max(np.abs(M))))
    return len(sv) < M.shape[0] or sv[-1] <= tol * scale


def _product_problem(sysA: SemialgSystem, sysB: SemialgSystem) -> _Problem:
    n1, n2 = sysA.n, sysB.n
    if n1 != n2:
        raise OracleError("both systems must live in the same space")
    N = n1 + n2
    left = list(range(n1))
    right = list(range(n1, N))
    eqs = [f.embed(N, left) for f in sysA.equalities] + [f.embed(N, right) for f in sysB.equalities]
    ineqs = [f.embed(N, left) for f in sysA.inequalities] + [f.embed(N, right) for f in sysB.inequalities]
    D = IntPolynomial.zero(N)
    for i in range(n1):
        diff = IntPolynomial.variable(i, N) - IntPolynomial.variable(n1 + i, N)
        D = D + diff * diff
    return _Problem(eqs, ineqs, D, floor=mpq(0))


def separation_oracle(sysA: SemialgSystem, sysB: SemialgSystem, compA: ComponentSpec,
                      compB: ComponentSpec, target_width: Fraction = _DEFAULT_WIDTH,
                      budget: OracleBudget = OracleBudget()) -> Enclosure:
    """Enclosure of the distance between two seeded components."""
    compA.check(sysA)
    compB.check(sysB)
    prob = _product_problem(sysA, sysB)
    comp = ComponentSpec.product(compA, compB)
    target = Fraction(target_width)
    tD = target
    for _ in range(12):
        enc = _minimize(prob, comp, tD, budget)
        a, b = isqrt_enclosure(max(enc.lo, Fraction(0)), enc.hi)
        if b - a <= target:
            break
        tD /= 4
    notes = []
    if a == 0:
        notes.append("distance enclosure reaches 0: the components may intersect")
    return Enclosure(a, b, enc.witness, enc.certified, enc.residual, enc.cells, notes)


def example_family(n: int, d: int, H: int) -> tuple[SemialgSystem, PowerExpr]:
    """The triangular system whose two real solutions sit ``2 H^(-d^(n-1)/2)`` apart."""
    if n < 2 or d < 2 or d % 2 or H < 2:
        raise ValueError("need n >= 2, even d >= 2 and H >= 2")
    X = [IntPolynomial.variable(j, n) for j in range(n)]
    eqs = [X[0].scale(H) - 1]
    for i in range(1, n - 1):
        eqs.append(X[i] - X[i - 1] ** d)
    eqs.append(X[n - 1] ** 2 - X[n - 2] ** d)
    sys = SemialgSystem(tuple(eqs), (), X[n - 1])
    dist = PowerExpr.of([(2, 1), (H, Fraction(-(d ** (n - 1)), 2))])
    return sys, dist


def example_points(n: int, d: int, H: int) -> tuple[RationalPoint, RationalPoint]:
    x = [Fraction(1, H)]
    for _ in range(1, n - 1):
        x.append(x[-1] ** d)
    last = Fraction(1, H ** (d ** (n - 1) // 2))
    return tuple(x + [last]), tuple(x + [-last])


def example_components(n: int, d: int, H: int, resolution: int = 4):
    """The family's system twice, with boxes isolating its two real points."""
    sys, dist = example_family(n, d, H)
    p, q = example_points(n, d, H)
    gap = p[-1] / 2
    free = tuple((Fraction(-2), Fraction(2)) for _ in range(n - 1))
    upper = ComponentSpec(p, free + ((gap, Fraction(2)),), resolution)
    lower = ComponentSpec(q, free + ((Fraction(-2), -gap),), resolution)
    return sys, sys, upper, lower, dist

"""Exact rational interval arithmetic and interval Newton (Krawczyk) tests.

Endpoints are ``gmpy2.mpq``; nothing here rounds, so every enclosure is
rigorous.  Polynomials are compiled once into term lists so that range
evaluation over many boxes stays cheap.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

import gmpy2
from gmpy2 import mpq

from .polycore import IntPolynomial


def to_mpq(x) -> mpq:
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    return mpq(x)


def to_fraction(x: mpq) -> Fraction:
    return Fraction(int(x.numerator), int(x.denominator))


class Iv:
    """Closed interval ``[lo, hi]``."""

    __slots__ = ("lo", "hi")

    def __init__(self, lo, hi=None):
        self.lo = to_mpq(lo)
        self.hi = self.lo if hi is None else to_mpq(hi)
        if self.lo > self.hi:
            raise ValueError("empty interval")

    def __repr__(self):
        return f"Iv({self.lo}, {self.hi})"

    def __add__(self, o):
        if isinstance(o, Iv):
            return Iv(self.lo + o.lo, self.hi + o.hi)
        o = to_mpq(o)
        return Iv(self.lo + o, self.hi + o)

    __radd__ = __add__

    def __neg__(self):
        return Iv(-self.hi, -self.lo)

    def __sub__(self, o):
        return self + (-o if isinstance(o, Iv) else -to_mpq(o))

    def __rsub__(self, o):
        return (-self) + o

    def __mul__(self, o):
        if not isinstance(o, Iv):
            o = to_mpq(o)
            a, b = self.lo * o, self.hi * o
            return Iv(a, b) if a <= b else Iv(b, a)
        p = (self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi)
        return Iv(min(p), max(p))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k == 0:
            return Iv(1)
        a, b = self.lo ** k, self.hi ** k
        if k % 2:
            return Iv(a, b)
        if self.lo >= 0:
            return Iv(a, b)
        if self.hi <= 0:
            return Iv(b, a)
        return Iv(0, max(a, b))

    @property
    def mid(self) -> mpq:
        return (self.lo + self.hi) / 2

    @property
    def width(self) -> mpq:
        return self.hi - self.lo

    def contains(self, x) -> bool:
        x = to_mpq(x)
        return self.lo <= x <= self.hi

    def strictly_inside(self, o: Iv) -> bool:
        return o.lo < self.lo and self.hi < o.hi

    def intersect(self, o: Iv) -> Iv | None:
        lo, hi = max(self.lo, o.lo), min(self.hi, o.hi)
        return Iv(lo, hi) if lo <= hi else None

    def hull(self, o: Iv) -> Iv:
        return Iv(min(self.lo, o.lo), max(self.hi, o.hi))


Box = Sequence[Iv]


class CompiledPoly:
    """Term list of an integer polynomial for repeated interval and point evaluation."""

    __slots__ = ("n", "terms", "fterms", "poly", "_grad")

    def __init__(self, poly: IntPolynomial | None = None, *, num_vars: int | None = None,
                 rational_terms: dict | None = None):
        self.poly = poly
        if poly is not None:
            self.n = poly.num_vars
            items = [(mono, mpq(c)) for mono, c in poly.terms.items()]
        else:
            self.n = num_vars
            items = [(mono, c) for mono, c in rational_terms.items() if c]
        self.terms = [(c, [(j, e) for j, e in enumerate(mono) if e]) for mono, c in items]
        self.fterms = [(float(c), vs) for c, vs in self.terms]
        self._grad = None

    def term_dict(self) -> dict:
        out = {}
        for c, vs in self.terms:
            mono = [0] * self.n
            for j, e in vs:
                mono[j] = e
            out[tuple(mono)] = c
        return out

    @property
    def gradient(self) -> list[CompiledPoly]:
        if self._grad is None:
            grads = []
            for j in range(self.n):
                acc = {}
                for c, vs in self.terms:
                    mono = [0] * self.n
                    for v, e in vs:
                        mono[v] = e
                    if mono[j]:
                        k = mono[j]
                        mono[j] -= 1
                        key = tuple(mono)
                        acc[key] = acc.get(key, 0) + c * k
                grads.append(CompiledPoly(num_vars=self.n, rational_terms=acc))
            self._grad = grads
        return self._grad

    def at(self, point: Sequence) -> mpq:
        acc = mpq(0)
        pt = [to_mpq(v) for v in point]
        for c, vs in self.terms:
            t = c
            for j, e in vs:
                t *= pt[j] ** e
            acc += t
        return acc

    def atf(self, point: Sequence[float]) -> float:
        acc = 0.0
        for c, vs in self.fterms:
            t = c
            for j, e in vs:
                t *= point[j] ** e
            acc += t
        return acc

    def over(self, box: Box) -> Iv:
        lo = hi = mpq(0)
        cache: dict[tuple[int, int], Iv] = {}
        for c, vs in self.terms:
            t = Iv(c)
            for key in vs:
                p = cache.get(key)
                if p is None:
                    p = cache[key] = box[key[0]] ** key[1]
                t = t * p
            lo += t.lo
            hi += t.hi
        return Iv(lo, hi)

    def centered(self, box: Box) -> Iv:
        """Naive range intersected with the mean-value form about the box centre."""
        naive = self.over(box)
        c = [b.mid for b in box]
        mv = Iv(self.at(c))
        for j, dj in enumerate(self.gradient):
            if box[j].width:
                mv = mv + dj.over(box) * (box[j] - c[j])
        return naive.intersect(mv) or naive


def combine(obj: CompiledPoly, cons: Sequence[CompiledPoly], weights: Sequence[mpq]) -> CompiledPoly:
    """``obj - sum w_i cons_i`` as one polynomial, so cancellations are exact."""
    acc = obj.term_dict()
    for w, f in zip(weights, cons):
        if w:
            for mono, c in f.term_dict().items():
                acc[mono] = acc.get(mono, 0) - w * c
    return CompiledPoly(num_vars=obj.n, rational_terms=acc)


def lagrangian_range(obj: CompiledPoly, cons: Sequence[CompiledPoly],
                     weights: Sequence[mpq], box: Box) -> Iv:
    """Range of ``obj - sum w_i cons_i`` over ``box`` by a centred form."""
    return combine(obj, cons, weights).centered(box)


def krawczyk(funcs: Sequence[CompiledPoly], solve_for: Sequence[int], box: Box,
             center: Sequence[mpq]) -> bool:
    """Certify a unique zero of ``funcs`` inside ``box`` (varying only ``solve_for``).

    Coordinates outside ``solve_for`` must be degenerate in ``box``.
    """
    import numpy as np

    k = len(funcs)
    if k != len(solve_for):
        raise ValueError("square subsystem required")
    J0 = np.array([[float(f.gradient[j].at(center)) for j in solve_for] for f in funcs])
    try:
        Yf = np.linalg.inv(J0)
    except np.linalg.LinAlgError:
        return False
    if not np.all(np.isfinite(Yf)):
        return False
    Y = [[mpq(float(v)) for v in row] for row in Yf]
    fy = [f.at(center) for f in funcs]
    JX = [[f.gradient[j].over(box) for j in solve_for] for f in funcs]
    for r in range(k):
        acc = Iv(center[solve_for[r]] - sum((Y[r][q] * fy[q] for q in range(k)), mpq(0)))
        for c in range(k):
            # (I - Y J(X)) entry
            m = Iv(1 if r == c else 0)
            for q in range(k):
                if Y[r][q]:
                    m = m - JX[q][c] * Y[r][q]
            acc = acc + m * (box[solve_for[c]] - center[solve_for[c]])
        if not acc.strictly_inside(box[solve_for[r]]):
            return False
    return True


def isqrt_enclosure(lo: Fraction, hi: Fraction, bits: int = 64) -> tuple[Fraction, Fraction]:
    """Rational ``[a, b]`` with ``a <= sqrt(lo)`` and ``sqrt(hi) <= b``."""
    if lo < 0:
        lo = Fraction(0)
    scale = 1 << (2 * bits)
    a_num = gmpy2.isqrt(int((lo * scale).__floor__()))
    N = -((-hi * scale).__floor__())
    r = gmpy2.isqrt(int(N))
    if r * r < N:
        r += 1
    return Fraction(int(a_num), 1 << bits), Fraction(int(r), 1 << bits)


_GRID = 1 << 96


def _round_out(iv: Iv, within: Iv) -> Iv:
    """Outward rounding to a dyadic grid, clipped to ``within``; keeps denominators small."""
    lo = mpq(gmpy2.f_div(iv.lo.numerator * _GRID, iv.lo.denominator), _GRID)
    hi = mpq(gmpy2.c_div(iv.hi.numerator * _GRID, iv.hi.denominator), _GRID)
    return Iv(max(lo, within.lo), min(hi, within.hi))


def krawczyk_contract(funcs: Sequence[CompiledPoly], box: Box, rounds: int = 40) -> list[Iv] | None:
    """Shrink ``box`` around the zeros of a square system; ``None`` when none can exist.

    Every zero inside ``box`` also lies in its Krawczyk image, so intersecting
    the two never loses a zero.
    """
    import numpy as np

    n = len(box)
    if len(funcs) != n:
        raise ValueError("square system required")
    X = list(box)
    for _ in range(rounds):
        c = [b.mid for b in X]
        J0 = np.array([[float(d.at(c)) for d in f.gradient] for f in funcs])
        try:
            Yf = np.linalg.inv(J0)
        except np.linalg.LinAlgError:
            return X
        if not np.all(np.isfinite(Yf)):
            return X
        Y = [[mpq(float(v)) for v in row] for row in Yf]
        fy = [f.at(c) for f in funcs]
        JX = [[d.over(X) for d in f.gradient] for f in funcs]
        new = []
        for r in range(n):
            acc = Iv(c[r] - sum((Y[r][q] * fy[q] for q in range(n)), mpq(0)))
            for col in range(n):
                m = Iv(1 if r == col else 0)
                for q in range(n):
                    if Y[r][q]:
                        m = m - JX[q][col] * Y[r][q]
                if X[col].width:
                    acc = acc + m * (X[col] - c[col])
            cut = acc.intersect(X[r])
            if cut is None:
                return None
            new.append(_round_out(cut, X[r]))
        shrink = max(a.width for a in new) * 2 > max(b.width for b in X)
        X = new
        if shrink or max(b.width for b in X) == 0:
            break
    return X

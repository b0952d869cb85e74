"""Exact real-root isolation for univariate integer polynomials.

Polynomials are coefficient lists, lowest degree first.  Isolation runs
Sturm-sequence bisection on the squarefree part with dyadic endpoints;
a midpoint that hits a root exactly is reported as a degenerate interval
``[r, r]`` and deflated out of the working polynomial.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

Coeffs = list[int]


def trim(p: Sequence[int]) -> Coeffs:
    out = list(p)
    while out and out[-1] == 0:
        out.pop()
    return out


def degree(p: Sequence[int]) -> int:
    p = trim(p)
    if not p:
        raise ValueError("zero polynomial has no degree")
    return len(p) - 1


def evaluate(p: Sequence[int], x: Fraction | int) -> Fraction:
    x = Fraction(x)
    # Horner on numerator/denominator to stay in integers
    num, den = x.numerator, x.denominator
    acc = 0
    k = len(p) - 1
    for i, c in enumerate(reversed(p)):
        acc = acc * num + c * den ** i
    return Fraction(acc, den ** k) if k >= 0 else Fraction(0)


def sign_at(p: Sequence[int], x: Fraction | int) -> int:
    v = evaluate(p, x)
    return (v > 0) - (v < 0)


def derivative(p: Sequence[int]) -> Coeffs:
    return trim([i * c for i, c in enumerate(p)][1:])


def content(p: Sequence[int]) -> int:
    g = 0
    for c in p:
        g = gcd(g, c)
    return g


def primitive(p: Sequence[int]) -> Coeffs:
    p = trim(p)
    if not p:
        return []
    g = content(p)
    return [c // g for c in p]


def _prem(a: Coeffs, b: Coeffs) -> Coeffs:
    """Pseudo-remainder of ``a`` by ``b`` scaled by a positive factor."""
    a = list(a)
    lb = b[-1]
    db = len(b) - 1
    scale_sign = 1 if lb > 0 else -1
    while len(a) - 1 >= db and a:
        la = a[-1]
        shift = len(a) - 1 - db
        # a <- |lb| * a - sign(lb) * la * x^shift * b
        a = [abs(lb) * c for c in a]
        for i, c in enumerate(b):
            a[i + shift] -= scale_sign * la * c
        a = trim(a)
    return a


def poly_gcd(a: Sequence[int], b: Sequence[int]) -> Coeffs:
    a, b = primitive(a), primitive(b)
    while b:
        a, b = b, primitive(_prem(a, b))
    if not a:
        return []
    return a if a[-1] > 0 else [-c for c in a]


def exact_quotient(a: Sequence[int], b: Sequence[int]) -> Coeffs:
    """``a / b`` when ``b`` divides ``a`` over the integers; raises otherwise."""
    a = trim(a)
    b = trim(b)
    if not b:
        raise ZeroDivisionError("division by zero polynomial")
    q = [0] * max(len(a) - len(b) + 1, 0)
    r = list(a)
    while len(r) >= len(b) and r:
        shift = len(r) - len(b)
        c, rem = divmod(r[-1], b[-1])
        if rem:
            raise ValueError("division is not exact over the integers")
        q[shift] = c
        for i, bc in enumerate(b):
            r[i + shift] -= c * bc
        r = trim(r)
    if r:
        raise ValueError("division is not exact")
    return q


def squarefree_part(p: Sequence[int]) -> Coeffs:
    p = primitive(p)
    if not p:
        raise ValueError("zero polynomial")
    if len(p) <= 2:
        return p if p[-1] > 0 else [-c for c in p]
    g = poly_gcd(p, derivative(p))
    q = primitive(exact_quotient(p, g) if len(g) > 1 else p)
    return q if q[-1] > 0 else [-c for c in q]


def sturm_sequence(p: Sequence[int]) -> list[Coeffs]:
    seq = [trim(p), derivative(p)]
    while seq[-1] and len(seq[-1]) > 1:
        r = _prem(seq[-2], seq[-1])
        if not r:
            break
        seq.append(primitive([-c for c in r]))
    return [s for s in seq if s]


def _variations(seq: list[Coeffs], x: Fraction) -> int:
    signs = [sign_at(s, x) for s in seq]
    signs = [s for s in signs if s]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def root_bound(p: Sequence[int]) -> Fraction:
    """A power of two strictly exceeding every root's modulus."""
    p = trim(p)
    lc = abs(p[-1])
    bound = 1 + Fraction(max(abs(c) for c in p[:-1]), lc) if len(p) > 1 else Fraction(1)
    b = Fraction(1)
    while b <= bound:
        b *= 2
    return b


def count_roots(p: Sequence[int], a: Fraction, b: Fraction) -> int:
    """Distinct real roots of ``p`` in the open interval ``(a, b)``; endpoints must not be roots."""
    sf = squarefree_part(p)
    seq = sturm_sequence(sf)
    return _variations(seq, Fraction(a)) - _variations(seq, Fraction(b))


def isolate_real_roots(q: Sequence[int]) -> list[tuple[Fraction, Fraction]]:
    """Disjoint rational intervals, one per distinct real root, in increasing order.

    An interval ``(lo, hi)`` with ``lo < hi`` has a single simple root in its
    interior and non-root endpoints; ``lo == hi`` marks an exact root.
    """
    q = trim(q)
    if not q:
        raise ValueError("cannot isolate roots of the zero polynomial")
    work = squarefree_part(q)
    if len(work) == 1:
        return []
    B = root_bound(work)
    seq = sturm_sequence(work)
    out: list[tuple[Fraction, Fraction]] = []
    stack = [(-B, B, _variations(seq, -B), _variations(seq, B))]
    while stack:
        a, b, va, vb = stack.pop()
        k = va - vb
        if k == 0:
            continue
        if k == 1:
            out.append((a, b))
            continue
        mid = (a + b) / 2
        if evaluate(work, mid) == 0:
            out.append((mid, mid))
            work = _deflate(work, mid)
            seq = sturm_sequence(work)
            # variation counts depend on the sequence; recompute them
            va, vb = _variations(seq, a), _variations(seq, b)
            stack = [(x, y, _variations(seq, x), _variations(seq, y)) for x, y, _, _ in stack]
        vm = _variations(seq, mid)
        stack.append((a, mid, va, vm))
        stack.append((mid, b, vm, vb))
    out.sort()
    return out


def _deflate(p: Coeffs, r: Fraction) -> Coeffs:
    q = exact_quotient(p, [-r.numerator, r.denominator])
    return primitive(q)


def refine_root(q: Sequence[int], interval: tuple[Fraction, Fraction],
                width: Fraction) -> tuple[Fraction, Fraction]:
    """Bisect an isolating interval down to ``hi - lo <= width``."""
    lo, hi = Fraction(interval[0]), Fraction(interval[1])
    if lo == hi:
        return lo, hi
    sf = squarefree_part(q)
    # an endpoint may be an exact root already reported on its own
    for e in (lo, hi):
        if evaluate(sf, e) == 0:
            sf = _deflate(sf, e)
    slo = sign_at(sf, lo)
    if slo == 0 or sign_at(sf, hi) == slo:
        raise ValueError("interval does not isolate a simple root with non-root endpoints")
    while hi - lo > width:
        mid = (lo + hi) / 2
        sm = sign_at(sf, mid)
        if sm == 0:
            return mid, mid
        if sm == slo:
            lo = mid
        else:
            hi = mid
    return lo, hi


def rational_root_in(q: Sequence[int], interval: tuple[Fraction, Fraction]) -> Fraction | None:
    """The rational root inside an isolating interval, if the root is rational."""
    lo, hi = interval
    if lo == hi:
        return lo
    sf = squarefree_part(q)
    lc = abs(sf[-1])
    lo, hi = refine_root(sf, (lo, hi), Fraction(1, 2 * lc * lc))
    if lo == hi:
        return lo
    # rationals with denominator dividing lc are spaced at least 1/lc^2 apart
    cand = ((lo + hi) / 2).limit_denominator(lc)
    if lo <= cand <= hi and evaluate(sf, cand) == 0:
        return cand
    return None


def isolating_contains(interval: tuple[Fraction, Fraction], x: Fraction) -> bool:
    """Membership under the isolation convention: open unless degenerate."""
    lo, hi = interval
    return x == lo if lo == hi else lo < x < hi


def interval_meets(isolating: tuple[Fraction, Fraction], closed: tuple[Fraction, Fraction]) -> bool:
    """Whether an isolating interval intersects a closed interval ``[a, b]``."""
    lo, hi = isolating
    a, b = closed
    if lo == hi:
        return a <= lo <= b
    return lo < b and a < hi


def root_degree(q: Sequence[int], interval: tuple[Fraction, Fraction]) -> int:
    """Degree of the irreducible factor of ``q`` owning the root isolated by ``interval``."""
    from sympy import Poly, symbols

    u = symbols("u")
    poly = Poly(list(reversed(trim(q))), u)
    lo, hi = interval
    for fac, _ in poly.factor_list()[1]:
        coeffs = [int(c) for c in reversed(fac.all_coeffs())]
        if lo == hi:
            if evaluate(coeffs, lo) == 0:
                return len(coeffs) - 1
        elif sign_at(coeffs, lo) * sign_at(coeffs, hi) < 0:
            return len(coeffs) - 1
    raise ValueError("no factor owns a root in the interval")


def to_text(p: Sequence[int], var: str = "U") -> str:
    p = trim(p)
    if not p:
        return "0"
    parts = []
    for k in range(len(p) - 1, -1, -1):
        c = p[k]
        if c == 0:
            continue
        mag = abs(c)
        body = (f"{var}^{k}" if k > 1 else var if k == 1 else "")
        coef = "" if (mag == 1 and k) else str(mag)
        term = coef + ("*" if coef and body else "") + body
        parts.append(("-" if c < 0 else "+", term))
    head = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    return head + "".join(f" {s} {t}" for s, t in parts[1:])

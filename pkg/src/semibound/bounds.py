"""Closed-form degree, magnitude, separation and coefficient bounds.

The magnitude bounds are far too small to expand (exponents like
``n*2^n*d^n``), so they are kept as :class:`PowerExpr`, a product of
integer bases raised to rational exponents.  Comparisons go through
certified log2 enclosures first and fall back to exact big-integer
arithmetic when the enclosures do not separate.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from fractions import Fraction
from math import comb, gcd
from typing import Iterable, Mapping

LOG2_E_UPPER = Fraction(14427, 10000)   # log2(e) = 1.442695...

# exact expansion is refused beyond this many bits
EXACT_BIT_LIMIT = 1 << 24


class BoundTooLarge(ArithmeticError):
    """Exact value would be too large to materialize."""


class Undecided(ArithmeticError):
    """Certified enclosures overlap and exact arithmetic is out of reach."""


# -- certified log2 ----------------------------------------------------------

def _trunc(m: int, s: int, prec: int, up: bool) -> tuple[int, int]:
    extra = m.bit_length() - prec
    if extra <= 0:
        return m, s
    if up:
        return -((-m) >> extra), s + extra
    return m >> extra, s + extra


def _log2_int(a: int, bits: int) -> tuple[Fraction, Fraction]:
    if a <= 0:
        raise ValueError("log2 of a non-positive integer")
    if a & (a - 1) == 0:
        k = Fraction(a.bit_length() - 1)
        return k, k
    prec = bits + 32
    lo_m, lo_s = _trunc(a, 0, prec, up=False)
    hi_m, hi_s = _trunc(a, 0, prec, up=True)
    # invariant: lo_m*2^lo_s <= a^(2^i) <= hi_m*2^hi_s
    for _ in range(bits):
        lo_m, lo_s = _trunc(lo_m * lo_m, 2 * lo_s, prec, up=False)
        hi_m, hi_s = _trunc(hi_m * hi_m, 2 * hi_s, prec, up=True)
    scale = 1 << bits
    return (Fraction(lo_m.bit_length() - 1 + lo_s, scale),
            Fraction(hi_m.bit_length() + hi_s, scale))


def log2_enclosure(x: int | Fraction, bits: int = 48) -> tuple[Fraction, Fraction]:
    """Rational ``(lo, hi)`` with ``lo <= log2(x) <= hi`` and width about ``2^-bits``."""
    x = Fraction(x)
    if x <= 0:
        raise ValueError("log2 of a non-positive number")
    nlo, nhi = _log2_int(x.numerator, bits)
    if x.denominator == 1:
        return nlo, nhi
    dlo, dhi = _log2_int(x.denominator, bits)
    return nlo - dhi, nhi - dlo


def _scale_enclosure(enc: tuple[Fraction, Fraction], k: Fraction | int) -> tuple[Fraction, Fraction]:
    lo, hi = enc
    return (k * lo, k * hi) if k >= 0 else (k * hi, k * lo)


def _add_enc(*encs: tuple[Fraction, Fraction]) -> tuple[Fraction, Fraction]:
    return (sum((e[0] for e in encs), Fraction(0)), sum((e[1] for e in encs), Fraction(0)))


@lru_cache(maxsize=4096)
def log2_binomial_enclosure(a: int, b: int, bits: int = 48) -> tuple[Fraction, Fraction]:
    """Enclosure of ``log2 C(a, b)``; exact when the binomial is small."""
    if not 0 <= b <= a:
        raise ValueError("binomial out of range")
    b = min(b, a - b)
    if b == 0:
        return Fraction(0), Fraction(0)
    if b <= 512 or a <= 1 << 12:
        return log2_enclosure(comb(a, b), bits)
    # (a/b)^b <= C(a,b) <= (e*a/b)^b
    base = log2_enclosure(Fraction(a, b), bits)
    lo = b * base[0]
    hi = b * (base[1] + LOG2_E_UPPER)
    return lo, hi


# -- coprime bases and PowerExpr --------------------------------------------

def coprime_basis(nums: Iterable[int]) -> list[int]:
    """Pairwise coprime integers > 1 generating every input multiplicatively."""
    work = sorted({int(v) for v in nums if v > 1})
    changed = True
    while changed:
        changed = False
        for i in range(len(work)):
            for j in range(i + 1, len(work)):
                g = gcd(work[i], work[j])
                if g > 1:
                    a, b = work[i], work[j]
                    rest = [w for k, w in enumerate(work) if k not in (i, j)]
                    work = sorted({v for v in rest + [g, a // g, b // g] if v > 1})
                    changed = True
                    break
            if changed:
                break
    return work


def _factor_over(value: int, basis: list[int]) -> dict[int, int]:
    out = {}
    for c in basis:
        k = 0
        while value % c == 0:
            value //= c
            k += 1
        if k:
            out[c] = k
    if value != 1:
        raise AssertionError("value does not factor over the coprime basis")
    return out


def _integer_root(c: int) -> tuple[int, int]:
    """Write ``c = r^k`` with ``k`` maximal."""
    best = (c, 1)
    for k in range(2, c.bit_length() + 1):
        r = round(c ** (1.0 / k)) if c.bit_length() < 1000 else _iroot(c, k)
        for cand in (r - 1, r, r + 1):
            if cand > 1 and cand ** k == c:
                best = (cand, k)
    return best


def _iroot(c: int, k: int) -> int:
    lo, hi = 1, 1 << (c.bit_length() // k + 1)
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if mid ** k <= c:
            lo = mid
        else:
            hi = mid - 1
    return lo


@dataclass(frozen=True, eq=False)
class PowerExpr:
    """``prod base^exp`` with pairwise coprime integer bases and rational exponents."""

    factors: tuple[tuple[int, Fraction], ...] = ()

    @classmethod
    def of(cls, parts: Mapping[int, Fraction | int] | Iterable[tuple[int, Fraction | int]]) -> PowerExpr:
        items = list(parts.items()) if isinstance(parts, Mapping) else list(parts)
        for b, _ in items:
            if b < 1:
                raise ValueError("PowerExpr bases must be positive integers")
        basis = coprime_basis(b for b, _ in items)
        acc: dict[int, Fraction] = {}
        for b, e in items:
            if b == 1:
                continue
            for c, k in _factor_over(b, basis).items():
                acc[c] = acc.get(c, Fraction(0)) + k * Fraction(e)
        reduced: dict[int, Fraction] = {}
        for c, e in acc.items():
            if e == 0:
                continue
            r, k = _integer_root(c)
            reduced[r] = reduced.get(r, Fraction(0)) + k * e
        return cls(tuple(sorted((b, e) for b, e in reduced.items() if e != 0)))

    @classmethod
    def power(cls, base: int, exp: Fraction | int) -> PowerExpr:
        return cls.of({base: Fraction(exp)})

    def as_dict(self) -> dict[int, Fraction]:
        return dict(self.factors)

    def __mul__(self, other: PowerExpr) -> PowerExpr:
        return PowerExpr.of(list(self.factors) + list(other.factors))

    def __truediv__(self, other: PowerExpr) -> PowerExpr:
        return self * other ** -1

    def __pow__(self, k: Fraction | int) -> PowerExpr:
        k = Fraction(k)
        return PowerExpr.of([(b, e * k) for b, e in self.factors])

    def __eq__(self, other) -> bool:
        if not isinstance(other, PowerExpr):
            return NotImplemented
        # equal iff the quotient is the empty product over a common coprime basis
        return not (self / other).factors

    __hash__ = None

    def exponent_denominator(self) -> int:
        den = 1
        for _, e in self.factors:
            den = den * e.denominator // gcd(den, e.denominator)
        return den

    def has_integer_exponents(self) -> bool:
        return self.exponent_denominator() == 1

    def log2_enclosure(self, bits: int = 48) -> tuple[Fraction, Fraction]:
        return _add_enc(*(_scale_enclosure(log2_enclosure(b, bits), e) for b, e in self.factors))

    def log2_float(self) -> float:
        lo, hi = self.log2_enclosure(40)
        return float((lo + hi) / 2)

    def exact_bits(self) -> int:
        q = self.exponent_denominator()
        return sum(abs(e * q) * b.bit_length() for b, e in self.factors)

    def to_fraction(self) -> Fraction:
        """Exact value; only for integer exponents of manageable size."""
        if not self.has_integer_exponents():
            raise ValueError("value is irrational in general (non-integer exponents)")
        if self.exact_bits() > EXACT_BIT_LIMIT:
            raise BoundTooLarge("exact expansion too large")
        out = Fraction(1)
        for b, e in self.factors:
            out *= Fraction(b) ** int(e)
        return out

    def compare(self, value: Fraction | int) -> int:
        """Sign of ``value - self`` for a positive rational ``value``."""
        value = Fraction(value)
        if value <= 0:
            raise ValueError("comparison needs a positive value")
        vlo, vhi = log2_enclosure(value, 48)
        slo, shi = self.log2_enclosure(48)
        if vlo > shi:
            return 1
        if vhi < slo:
            return -1
        q = self.exponent_denominator()
        bits = q * max(value.numerator.bit_length(), value.denominator.bit_length()) + self.exact_bits()
        if bits > EXACT_BIT_LIMIT:
            raise Undecided("enclosures overlap and exact comparison is too large")
        num, den = 1, 1
        for b, e in self.factors:
            k = int(e * q)
            if k > 0:
                num *= b ** k
            else:
                den *= b ** (-k)
        left = value.numerator ** q * den
        right = value.denominator ** q * num
        return (left > right) - (left < right)

    def to_text(self) -> str:
        if not self.factors:
            return "1"
        return " * ".join(f"{b}^({e})" if e.denominator != 1 or e < 0 else f"{b}^{e}"
                          for b, e in self.factors)

    def __repr__(self) -> str:
        return f"PowerExpr({self.to_text()})"


# -- parameter summaries -----------------------------------------------------

@dataclass(frozen=True)
class BoundParams:
    n: int
    m: int
    d: int
    d0: int
    H: int
    H0: int
    l: int = 0
    s: int = 0
    Htilde_override: int | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("n must be at least 2")
        if self.d < 2 or self.d % 2:
            raise ValueError("d must be an even integer >= 2")
        if not 0 <= self.d0 <= self.d:
            raise ValueError("need 0 <= d0 <= d")
        if not 0 <= self.s <= self.n:
            raise ValueError("need 0 <= s <= n")
        if self.H0 > self.H:
            raise ValueError("need H0 <= H")

    @property
    def Htilde(self) -> int:
        if self.Htilde_override is not None:
            return self.Htilde_override
        return max(self.H, 2 * self.n + 2 * self.m)

    def with_s(self, s: int) -> BoundParams:
        return BoundParams(self.n, self.m, self.d, self.d0, self.H, self.H0, self.l, s,
                           self.Htilde_override)

    @classmethod
    def from_system(cls, sys, s: int = 0) -> BoundParams:
        src = sys.bound_system()
        return cls(src.n, src.m, src.d, src.d0, src.H, src.H0, src.l, s)


def degree_bound(n: int, d: int) -> int:
    if n < 2 or d < 2:
        raise ValueError("need n >= 2 and d >= 2")
    return 2 ** (n - 1) * d ** n


def _magnitude_exponent(n: int, d: int) -> int:
    return n * 2 ** n * d ** n


def magnitude_bound(params: BoundParams) -> PowerExpr:
    """``(2^(4-n/2) * Htilde * d^n)^(-n 2^n d^n)``."""
    n, d = params.n, params.d
    E = _magnitude_exponent(n, d)
    return PowerExpr.of([(2, -E * (4 - Fraction(n, 2))), (params.Htilde, -E), (d, -n * E)])


def magnitude_bound_for(n: int, d: int, Htilde: int) -> PowerExpr:
    return magnitude_bound(BoundParams(n, 1, d, 0, 0, 0, Htilde_override=Htilde))


def magnitude_base_squared(params: BoundParams) -> tuple[int, int]:
    """``(B, E)`` with the bound equal to ``B^(-E/2)``; all integers."""
    n, d = params.n, params.d
    two_exp = 8 - n
    base = params.Htilde ** 2 * d ** (2 * n)
    if two_exp >= 0:
        return base * 2 ** two_exp, _magnitude_exponent(n, d)
    # negative power of two: keep integers by folding it into the exponent sign
    raise ValueError("squared base is not an integer for n > 8")


def separation_htilde(n: int, H: int, m1: int, m2: int) -> int:
    return max(H, 4 * n + 2 * m1 + 2 * m2)


def separation_bound(n: int, d: int, H: int, m1: int, m2: int) -> PowerExpr:
    """``(2^(4-n) * Htilde * d^(2n))^(-n 2^(2n) d^(2n))`` with ``Htilde = max(H, 4n+2m1+2m2)``."""
    if n < 2 or d < 2 or d % 2:
        raise ValueError("need n >= 2 and even d >= 2")
    Ht = separation_htilde(n, H, m1, m2)
    E = n * 2 ** (2 * n) * d ** (2 * n)
    return PowerExpr.of([(2, -E * (4 - n)), (Ht, -E), (d, -2 * n * E)])


def bezout_numbers(n: int, s: int, d: int, d0: int) -> tuple[int, int, int]:
    """``(M1, M2, M3)``; ``M2 = 0`` when ``s = 0`` and ``M3 = 0`` when ``s = n``."""
    if not 0 <= s <= n:
        raise ValueError("need 0 <= s <= n")
    M1 = comb(n, s) * d ** s * (d - 1) ** (n - s)
    M2 = comb(n, s) * d0 * d ** (s - 1) * (d - 1) ** (n - s) if s >= 1 else 0
    M3 = comb(n - 1, s) * d0 * d ** s * (d - 1) ** (n - s - 1) if s <= n - 1 else 0
    return M1, M2, M3


def support_sizes(n: int, s: int, d: int, d0: int) -> tuple[int, int, int]:
    return comb(d0 + n, n), comb(d + n, n), comb(d - 1 + n, n) * (s + 1)


def resultant_t_degree(n: int, s: int, d: int, d0: int) -> int:
    """Total degree in ``(t0, t)`` of the parametric resultant: ``s*M2 + n*M3``."""
    _, M2, M3 = bezout_numbers(n, s, d, d0)
    return s * M2 + n * M3


def _M_parts(p: BoundParams):
    n, s, d, d0 = p.n, p.s, p.d, p.d0
    M1, M2, M3 = bezout_numbers(n, s, d, d0)
    N1, N2, N3 = support_sizes(n, s, d, d0)
    return M1, M2, M3, N1, N2, N3


def coefficient_bound_M_log2(params: BoundParams, bits: int = 48) -> tuple[Fraction, Fraction]:
    M1, M2, M3, N1, N2, N3 = _M_parts(params)
    n, s, d = params.n, params.s, params.d
    Ht = params.Htilde
    encs = [
        _scale_enclosure(log2_enclosure(2 * params.H0, bits), M1) if params.H0 else None,
        _scale_enclosure(log2_enclosure(2 * Ht, bits), s * M2 + n * M3),
        _scale_enclosure(log2_enclosure(d, bits), n * M3),
        _scale_enclosure(log2_enclosure(N1, bits), M1),
        _scale_enclosure(log2_enclosure(N2, bits), s * M2),
        _scale_enclosure(log2_enclosure(N3, bits), n * M3),
        log2_binomial_enclosure(M1 + N1 - 1, N1 - 1, bits),
        _scale_enclosure(log2_binomial_enclosure(M2 + N2 - 1, N2 - 1, bits), s),
        _scale_enclosure(log2_binomial_enclosure(M3 + N3 - 1, N3 - 1, bits), n),
    ]
    if params.H0 == 0:
        # (2*H0)^M1 with H0 = 0 makes the whole product vanish unless M1 = 0
        raise ValueError("H0 must be positive")
    return _add_enc(*[e for e in encs if e is not None])


def coefficient_bound_M(params: BoundParams) -> int:
    """Exact ``M_{S,sigma}``; raises :class:`BoundTooLarge` past the size limit."""
    lo, hi = coefficient_bound_M_log2(params, 16)
    if hi > EXACT_BIT_LIMIT:
        raise BoundTooLarge(f"M has about {float(hi):.3g} bits")
    M1, M2, M3, N1, N2, N3 = _M_parts(params)
    n, s, d = params.n, params.s, params.d
    Ht = params.Htilde
    return ((2 * params.H0) ** M1 * (2 * Ht) ** (s * M2 + n * M3) * d ** (n * M3)
            * N1 ** M1 * N2 ** (s * M2) * N3 ** (n * M3)
            * comb(M1 + N1 - 1, N1 - 1) * comb(M2 + N2 - 1, N2 - 1) ** s
            * comb(M3 + N3 - 1, N3 - 1) ** n)


def _le_log(lhs: tuple[Fraction, Fraction], rhs: tuple[Fraction, Fraction]) -> bool | None:
    if lhs[1] <= rhs[0]:
        return True
    if lhs[0] > rhs[1]:
        return False
    return None


def M_within_magnitude_ceiling(params: BoundParams) -> bool:
    """``M_{S,sigma} <= (2^(4-n/2) Htilde d^n)^(n 2^n d^n)``, decided with certainty."""
    inverse = magnitude_bound(params) ** -1
    for bits in (48, 96):
        verdict = _le_log(coefficient_bound_M_log2(params, bits), inverse.log2_enclosure(bits))
        if verdict is not None:
            return verdict
    # squared form: M^2 <= (2^(8-n) Htilde^2 d^(2n))^E
    M = coefficient_bound_M(params)
    return inverse.compare(M) <= 0


def proof_inequalities(params: BoundParams, bits: int = 48) -> list[tuple[str, bool]]:
    """The elementary inequalities that drive the magnitude bound, each decided exactly
    or through certified enclosures."""
    n, s, d = params.n, params.s, params.d
    M1, M2, M3, N1, N2, N3 = _M_parts(params)
    dn = d ** n
    out: list[tuple[str, bool]] = [
        ("N1 <= 3/2 d^n", 2 * N1 <= 3 * dn),
        ("N2 <= 3/2 d^n", 2 * N2 <= 3 * dn),
        ("N3 <= 9/4 d^n", 4 * N3 <= 9 * dn),
    ]
    for k, (Mi, Ni) in enumerate(((M1, N1), (M2, N2), (M3, N3)), start=1):
        enc = log2_binomial_enclosure(Mi + Ni - 1, Ni - 1, bits)
        verdict = _le_log(enc, (Fraction(Mi + Ni), Fraction(Mi + Ni)))
        if verdict is None:
            verdict = comb(Mi + Ni - 1, Ni - 1) <= 2 ** (Mi + Ni)
        out.append((f"binom(M{k}+N{k}-1, N{k}-1) <= 2^(M{k}+N{k})", verdict))
    out.append(("M1 + s M2 + n M3 <= (n+1) binom(n,s) d^n",
                M1 + s * M2 + n * M3 <= (n + 1) * comb(n, s) * dn))
    out.append(("(n+1) binom(n,s) d^n <= (n+1) 2^(n-1) d^n",
                comb(n, s) <= 2 ** (n - 1)))
    out.append(("M3 <= 2^(n-2) d^n", 4 * M3 <= 2 ** n * dn))
    out.append(("final exponent inequality", final_inequality(n, bits)))
    return out


def final_inequality(n: int, bits: int = 48) -> bool:
    """``(-2n^2 + (L+2)n + 4L + 4) 2^(n-2) + 3/2(n+1) + 9/4 n <= (4 - n/2) n 2^n``, ``L = log2 3``."""
    L_lo, L_hi = log2_enclosure(3, bits)

    def lhs(L):
        return ((-2 * n * n + (L + 2) * n + 4 * L + 4) * Fraction(2) ** (n - 2)
                + Fraction(3, 2) * (n + 1) + Fraction(9, 4) * n)

    rhs = (4 - Fraction(n, 2)) * n * 2 ** n
    # lhs is increasing in L
    if lhs(L_hi) <= rhs:
        return True
    if lhs(L_lo) > rhs:
        return False
    raise Undecided("log2(3) enclosure too coarse")


def chain_inequalities(params: BoundParams, bits: int = 48) -> list[tuple[str, bool]]:
    """The three successive upper bounds for ``log2 M`` in the magnitude-bound derivation."""
    n, s, d = params.n, params.s, params.d
    M1, M2, M3, N1, N2, N3 = _M_parts(params)
    L = log2_enclosure(3, bits)
    lHt = log2_enclosure(params.Htilde, bits)
    ld = log2_enclosure(d, bits)
    dn = d ** n
    logM = coefficient_bound_M_log2(params, bits)
    tot = M1 + s * M2 + n * M3
    first = _add_enc(
        (Fraction(2 * tot + N1 + s * N2 + n * N3),) * 2,
        _scale_enclosure((L[0] - 1, L[1] - 1), M1 + s * M2),
        _scale_enclosure((L[0] - 1, L[1] - 1), 2 * n * M3),
        _scale_enclosure(lHt, tot),
        _scale_enclosure(ld, n * (M3 + tot)),
    )
    q = Fraction(2) ** (n - 2)
    second = _add_enc(
        _scale_enclosure(((3 * L[0] + 1) * n + 2 * L[0] + 2, (3 * L[1] + 1) * n + 2 * L[1] + 2), q * dn),
        (Fraction(3, 2) * (n + 1) * dn + Fraction(9, 4) * n * dn,) * 2,
        _scale_enclosure(lHt, (n + 1) * 2 ** (n - 1) * dn),
        _scale_enclosure(ld, (2 * n * n + 3 * n) * q * dn),
    )
    third = _add_enc(
        _scale_enclosure((-2 * n * n + (L[0] + 2) * n + 4 * L[0] + 4,
                          -2 * n * n + (L[1] + 2) * n + 4 * L[1] + 4), q * dn),
        (Fraction(3, 2) * (n + 1) * dn + Fraction(9, 4) * n * dn,) * 2,
        _scale_enclosure(lHt, n * 2 ** n * dn),
        _scale_enclosure(ld, n * n * 2 ** n * dn),
    )
    results = []
    for name, enc in (("log2 M <= first chain bound", first),
                      ("log2 M <= second chain bound", second),
                      ("log2 M <= third chain bound", third)):
        verdict = _le_log(logM, enc)
        if verdict is None:
            raise Undecided(name)
        results.append((name, verdict))
    return results


def compare_abs_to_bound(value: Fraction | int, bound: PowerExpr) -> int:
    """Exact trichotomy of ``|value|`` against ``bound``: -1, 0 or 1."""
    value = Fraction(value)
    if value == 0:
        raise ValueError("the magnitude bound only speaks about nonzero minima")
    return bound.compare(abs(value))


@dataclass
class SComponents:
    s: int
    M1: int
    M2: int
    M3: int
    N1: int
    N2: int
    N3: int
    M: int | None
    log2_M: tuple[Fraction, Fraction]


@dataclass
class BoundReport:
    params: BoundParams
    degree_bound: int
    magnitude_bound: PowerExpr
    log2_magnitude: tuple[Fraction, Fraction]
    components: list[SComponents]
    separation: PowerExpr | None = None


def bound_report(sys, exact_M_bits: int = 1 << 16) -> BoundReport:
    """Bounds for a system; compactified systems report their original parameters."""
    base = BoundParams.from_system(sys)
    comps = []
    for s in range(0, min(base.n, base.m) + 1):
        p = base.with_s(s)
        M1, M2, M3, N1, N2, N3 = _M_parts(p)
        enc = coefficient_bound_M_log2(p)
        M = coefficient_bound_M(p) if enc[1] <= exact_M_bits else None
        comps.append(SComponents(s, M1, M2, M3, N1, N2, N3, M, enc))
    mag = magnitude_bound(base)
    return BoundReport(base, degree_bound(base.n, base.d), mag, mag.log2_enclosure(), comps)

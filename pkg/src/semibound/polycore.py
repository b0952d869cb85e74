"""Sparse multivariate polynomials with big-integer coefficients.

A polynomial lives in a fixed number of variable slots; monomials are
exponent tuples of that length.  Values are immutable.  Whenever a
homogenized context is entered the new variable ``x0`` is prepended as
slot 0, so slot ``j`` of the affine polynomial becomes slot ``j + 1``.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

Monomial = tuple[int, ...]
RationalPoint = Sequence[Fraction | int]


class PolynomialError(ValueError):
    """Raised on malformed polynomial operations (arity, index, degree)."""


class ZeroPolynomialError(PolynomialError):
    """The zero polynomial has no degree."""


def _grlex_key(mono: Monomial):
    return (sum(mono), mono)


class IntPolynomial:
    __slots__ = ("_nvars", "_terms", "_hash")

    def __init__(self, num_vars: int, terms: Mapping[Monomial, int] | None = None):
        if num_vars < 0:
            raise PolynomialError("num_vars must be non-negative")
        clean: dict[Monomial, int] = {}
        for mono, c in (terms or {}).items():
            mono = tuple(int(e) for e in mono)
            if len(mono) != num_vars:
                raise PolynomialError(
                    f"monomial {mono} has {len(mono)} slots, expected {num_vars}")
            if any(e < 0 for e in mono):
                raise PolynomialError(f"negative exponent in {mono}")
            if not isinstance(c, int):
                raise PolynomialError(f"coefficient {c!r} is not an integer")
            if c:
                clean[mono] = clean.get(mono, 0) + c
                if not clean[mono]:
                    del clean[mono]
        self._nvars = num_vars
        self._terms = clean
        self._hash = None

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, num_vars: int) -> IntPolynomial:
        return cls(num_vars)

    @classmethod
    def constant(cls, c: int, num_vars: int) -> IntPolynomial:
        return cls(num_vars, {(0,) * num_vars: c})

    @classmethod
    def variable(cls, j: int, num_vars: int) -> IntPolynomial:
        if not 0 <= j < num_vars:
            raise PolynomialError(f"variable index {j} out of range")
        mono = [0] * num_vars
        mono[j] = 1
        return cls(num_vars, {tuple(mono): 1})

    @classmethod
    def monomial(cls, exponents: Sequence[int], coeff: int = 1) -> IntPolynomial:
        return cls(len(exponents), {tuple(exponents): coeff})

    # -- basic protocol -----------------------------------------------------

    @property
    def num_vars(self) -> int:
        return self._nvars

    @property
    def terms(self) -> dict[Monomial, int]:
        return dict(self._terms)

    def items(self):
        """Terms in graded-lex order, largest first."""
        return sorted(self._terms.items(), key=lambda kv: _grlex_key(kv[0]), reverse=True)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def coefficient(self, mono: Monomial) -> int:
        return self._terms.get(tuple(mono), 0)

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = IntPolynomial.constant(other, self._nvars)
        if not isinstance(other, IntPolynomial):
            return NotImplemented
        return self._nvars == other._nvars and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self._nvars, frozenset(self._terms.items())))
        return self._hash

    def __repr__(self) -> str:
        return f"IntPolynomial({self._nvars}, {self.to_text()!r})"

    # -- arithmetic ---------------------------------------------------------

    def _coerce(self, other) -> IntPolynomial:
        if isinstance(other, int):
            return IntPolynomial.constant(other, self._nvars)
        if not isinstance(other, IntPolynomial):
            raise TypeError(f"cannot combine IntPolynomial with {type(other).__name__}")
        if other._nvars != self._nvars:
            raise PolynomialError(
                f"variable-count mismatch: {self._nvars} vs {other._nvars}")
        return other

    def __add__(self, other) -> IntPolynomial:
        other = self._coerce(other)
        out = dict(self._terms)
        for mono, c in other._terms.items():
            out[mono] = out.get(mono, 0) + c
        return IntPolynomial(self._nvars, out)

    __radd__ = __add__

    def __neg__(self) -> IntPolynomial:
        return IntPolynomial(self._nvars, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other) -> IntPolynomial:
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> IntPolynomial:
        return self._coerce(other) - self

    def __mul__(self, other) -> IntPolynomial:
        other = self._coerce(other)
        out: dict[Monomial, int] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                mono = tuple(a + b for a, b in zip(m1, m2))
                out[mono] = out.get(mono, 0) + c1 * c2
        return IntPolynomial(self._nvars, out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> IntPolynomial:
        if not isinstance(k, int) or k < 0:
            raise PolynomialError("exponent must be a non-negative integer")
        result = IntPolynomial.constant(1, self._nvars)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def scale(self, c: int) -> IntPolynomial:
        return IntPolynomial(self._nvars, {m: c * v for m, v in self._terms.items()})

    def exact_div(self, c: int) -> IntPolynomial:
        """Divide every coefficient by ``c``; raises if not exact."""
        out = {}
        for m, v in self._terms.items():
            q, r = divmod(v, c)
            if r:
                raise PolynomialError(f"coefficient {v} not divisible by {c}")
            out[m] = q
        return IntPolynomial(self._nvars, out)

    def content(self) -> int:
        from math import gcd
        g = 0
        for v in self._terms.values():
            g = gcd(g, v)
        return g

    # -- degree and size ----------------------------------------------------

    def total_degree(self) -> int:
        if not self._terms:
            raise ZeroPolynomialError("degree of the zero polynomial is undefined")
        return max(sum(m) for m in self._terms)

    def degree_in(self, j: int) -> int:
        if not 0 <= j < self._nvars:
            raise PolynomialError(f"variable index {j} out of range")
        if not self._terms:
            raise ZeroPolynomialError("degree of the zero polynomial is undefined")
        return max(m[j] for m in self._terms)

    def degree_in_group(self, slots: Iterable[int]) -> int:
        slots = list(slots)
        if not self._terms:
            raise ZeroPolynomialError("degree of the zero polynomial is undefined")
        return max(sum(m[j] for j in slots) for m in self._terms)

    def is_homogeneous_in(self, slots: Iterable[int], degree: int | None = None) -> bool:
        slots = list(slots)
        degs = {sum(m[j] for j in slots) for m in self._terms}
        if not degs:
            return True
        if len(degs) != 1:
            return False
        return degree is None or degs.pop() == degree

    def height(self) -> int:
        return max((abs(c) for c in self._terms.values()), default=0)

    # -- calculus and structure --------------------------------------------

    def partial_derivative(self, j: int) -> IntPolynomial:
        if not 0 <= j < self._nvars:
            raise PolynomialError(f"variable index {j} out of range")
        out = {}
        for m, c in self._terms.items():
            if m[j]:
                mono = m[:j] + (m[j] - 1,) + m[j + 1:]
                out[mono] = c * m[j]
        return IntPolynomial(self._nvars, out)

    def homogenize(self, e: int) -> IntPolynomial:
        """``x0^e * p(x1/x0, ..., xn/x0)`` with x0 prepended as slot 0."""
        if self._terms and e < self.total_degree():
            raise PolynomialError(f"cannot homogenize degree {self.total_degree()} to {e}")
        if e < 0:
            raise PolynomialError("homogenization degree must be non-negative")
        return IntPolynomial(self._nvars + 1,
                             {(e - sum(m),) + m: c for m, c in self._terms.items()})

    def dehomogenize(self, slot: int = 0) -> IntPolynomial:
        """Set variable ``slot`` to 1 and drop it."""
        return self.substitute_value(slot, 1)

    def substitute_value(self, j: int, value: int) -> IntPolynomial:
        """Replace variable ``j`` by an integer and drop the slot."""
        if not 0 <= j < self._nvars:
            raise PolynomialError(f"variable index {j} out of range")
        out: dict[Monomial, int] = {}
        for m, c in self._terms.items():
            mono = m[:j] + m[j + 1:]
            out[mono] = out.get(mono, 0) + c * value ** m[j]
        return IntPolynomial(self._nvars - 1, out)

    def substitute(self, j: int, q: IntPolynomial) -> IntPolynomial:
        """Replace variable ``j`` by the polynomial ``q`` (same slots).

        Slot ``j`` is kept; it is absent from the result only if ``q``
        does not involve it.
        """
        q = self._coerce(q)
        if not 0 <= j < self._nvars:
            raise PolynomialError(f"variable index {j} out of range")
        out = IntPolynomial.zero(self._nvars)
        powers = {0: IntPolynomial.constant(1, self._nvars)}
        for m, c in self._terms.items():
            k = m[j]
            if k not in powers:
                powers[k] = q ** k
            rest = m[:j] + (0,) + m[j + 1:]
            out = out + powers[k] * IntPolynomial(self._nvars, {rest: c})
        return out

    def drop_slot(self, j: int) -> IntPolynomial:
        """Remove slot ``j``; the polynomial must not involve it."""
        if any(m[j] for m in self._terms):
            raise PolynomialError(f"polynomial depends on slot {j}")
        return IntPolynomial(self._nvars - 1,
                             {m[:j] + m[j + 1:]: c for m, c in self._terms.items()})

    def embed(self, num_vars: int, slots: Sequence[int]) -> IntPolynomial:
        """Re-home variable ``i`` into slot ``slots[i]`` of a wider context."""
        if len(slots) != self._nvars:
            raise PolynomialError("slot map must cover every variable")
        out = {}
        for m, c in self._terms.items():
            mono = [0] * num_vars
            for i, e in enumerate(m):
                mono[slots[i]] += e
            out[tuple(mono)] = c
        return IntPolynomial(num_vars, out)

    def evaluate(self, point: RationalPoint) -> Fraction:
        if len(point) != self._nvars:
            raise PolynomialError(
                f"point has {len(point)} coordinates, polynomial has {self._nvars} variables")
        pt = [Fraction(v) for v in point]
        total = Fraction(0)
        for m, c in self._terms.items():
            term = Fraction(c)
            for v, e in zip(pt, m):
                if e:
                    term *= v ** e
            total += term
        return total

    def coefficients_in(self, j: int) -> dict[int, IntPolynomial]:
        """Split by powers of variable ``j``: {k: coefficient of x_j^k} (slot kept, zeroed)."""
        out: dict[int, dict[Monomial, int]] = {}
        for m, c in self._terms.items():
            rest = m[:j] + (0,) + m[j + 1:]
            out.setdefault(m[j], {})[rest] = c
        return {k: IntPolynomial(self._nvars, v) for k, v in out.items()}

    # -- text form ----------------------------------------------------------

    def to_text(self, names: Sequence[str] | None = None) -> str:
        if names is None:
            names = [f"x{i + 1}" for i in range(self._nvars)]
        if not self._terms:
            return "0"
        parts = []
        for mono, c in self.items():
            factors = [f"{names[i]}^{e}" if e > 1 else names[i]
                       for i, e in enumerate(mono) if e]
            mag = abs(c)
            if not factors:
                body = str(mag)
            elif mag == 1:
                body = " * ".join(factors)
            else:
                body = " * ".join([str(mag)] + factors)
            parts.append(("- " if c < 0 else "+ ") + body)
        text = " ".join(parts)
        return text[2:] if text.startswith("+ ") else "-" + text[1:]

    def __str__(self) -> str:
        return self.to_text()


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\^)|(\*)|([+-])|(\()|(\)))")


def parse_polynomial(text: str, names: Sequence[str]) -> IntPolynomial:
    """Parse ``c * x1^a1 * ... `` sums over the given variable names.

    Parenthesized sub-expressions and integer powers of them are accepted
    so hand-written inputs like ``(x1 - 1)^2`` work too.
    """
    index = {name: i for i, name in enumerate(names)}
    n = len(names)
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise PolynomialError(f"unexpected character {text[pos]!r} at offset {pos}")
        pos = m.end()
        kind = m.lastindex
        tokens.append((kind, m.group(kind), m.start(kind)))
    tokens.append((0, None, len(text)))
    i = 0

    def peek():
        return tokens[i]

    def take():
        nonlocal i
        tok = tokens[i]
        i += 1
        return tok

    def expr() -> IntPolynomial:
        total = IntPolynomial.zero(n)
        sign = 1
        if peek()[0] == 5:
            sign = -1 if take()[1] == "-" else 1
        total = total + term().scale(sign)
        while peek()[0] == 5:
            sign = -1 if take()[1] == "-" else 1
            total = total + term().scale(sign)
        return total

    def term() -> IntPolynomial:
        result = factor()
        while peek()[0] == 4:
            take()
            result = result * factor()
        return result

    def factor() -> IntPolynomial:
        kind, val, at = take()
        if kind == 1:
            base = IntPolynomial.constant(int(val), n)
        elif kind == 2:
            if val not in index:
                raise PolynomialError(f"unknown variable {val!r} at offset {at}")
            base = IntPolynomial.variable(index[val], n)
        elif kind == 6:
            base = expr()
            if take()[0] != 7:
                raise PolynomialError(f"missing ')' for '(' at offset {at}")
        else:
            raise PolynomialError(f"unexpected token {val!r} at offset {at}")
        if peek()[0] == 3:
            take()
            k, kval, kat = take()
            if k != 1:
                raise PolynomialError(f"exponent must be an integer at offset {kat}")
            base = base ** int(kval)
        return base

    result = expr()
    if peek()[0] != 0:
        raise PolynomialError(f"trailing input at offset {peek()[2]}")
    return result


def add(p: IntPolynomial, q: IntPolynomial) -> IntPolynomial:
    return p + q


def mul(p: IntPolynomial, q: IntPolynomial) -> IntPolynomial:
    return p * q


def homogenize(p: IntPolynomial, e: int) -> IntPolynomial:
    return p.homogenize(e)


def partial_derivative(p: IntPolynomial, j: int) -> IntPolynomial:
    return p.partial_derivative(j)


def evaluate(p: IntPolynomial, pt: RationalPoint) -> Fraction:
    return p.evaluate(pt)


def height(p: IntPolynomial) -> int:
    return p.height()


def total_degree(p: IntPolynomial) -> int:
    return p.total_degree()

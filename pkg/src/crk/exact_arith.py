"""Exact scalars and polynomials over the rationals.

Scalars are :class:`fractions.Fraction` throughout.  ``UniPoly`` is a dense
polynomial in one variable ``s``; ``MultiPoly`` is a sparse polynomial in a
fixed number of parameters ``t_1 .. t_d``.
"""

from __future__ import annotations

import random
from fractions import Fraction
from math import gcd
from operator import add
from typing import Iterable, Sequence

Rational = Fraction

__all__ = [
    "Rational",
    "rat",
    "parse_rational",
    "format_rational",
    "RationalSampler",
    "UniPoly",
    "MultiPoly",
    "sturm_chain",
    "sturm_real_roots",
    "refine_root",
    "rational_root_in",
]


def rat(x) -> Fraction:
    """Coerce ints, strings like ``"-3/4"`` and Fractions to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return parse_rational(x)
    if isinstance(x, bool) or not isinstance(x, int):
        raise TypeError(f"cannot convert {x!r} to an exact rational")
    return Fraction(x)


def parse_rational(text: str) -> Fraction:
    text = text.strip()
    if "." in text or "e" in text.lower():
        raise ValueError(f"not an exact rational literal: {text!r}")
    value = Fraction(text)
    return value


def format_rational(x: Fraction) -> str:
    # Fraction.__str__ already yields "p/q", or "p" when q == 1
    return str(Fraction(x))


class RationalSampler:
    """Seeded source of bounded rationals (numerator in [-20, 20], denominator in [1, 10])."""

    def __init__(self, seed, num_bound: int = 20, den_bound: int = 10):
        self.rng = random.Random(seed)
        self.num_bound = num_bound
        self.den_bound = den_bound

    def rational(self) -> Fraction:
        return Fraction(
            self.rng.randint(-self.num_bound, self.num_bound),
            self.rng.randint(1, self.den_bound),
        )

    def nonzero(self) -> Fraction:
        while True:
            x = self.rational()
            if x:
                return x

    def vector(self, n: int) -> list[Fraction]:
        return [self.rational() for _ in range(n)]

    def integer(self, lo: int, hi: int) -> int:
        return self.rng.randint(lo, hi)


class UniPoly:
    """Polynomial in one variable with rational coefficients, lowest degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [rat(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)

    @classmethod
    def constant(cls, c) -> "UniPoly":
        return cls([c])

    @classmethod
    def monomial(cls, degree: int, c=1) -> "UniPoly":
        return cls([0] * degree + [c])

    @classmethod
    def from_roots(cls, roots: Iterable) -> "UniPoly":
        p = cls([1])
        for k in roots:
            p = p * cls([-rat(k), 1])
        return p

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lead(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def coeff(self, k: int) -> Fraction:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else Fraction(0)

    def __call__(self, s) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * s + c
        return acc

    eval = __call__

    def __eq__(self, other) -> bool:
        if isinstance(other, UniPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == UniPoly([other]).coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"UniPoly([{', '.join(format_rational(c) for c in self.coeffs)}])"

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mono = "" if k == 0 else ("s" if k == 1 else f"s^{k}")
            if mono and c == 1:
                terms.append(mono)
            elif mono and c == -1:
                terms.append("-" + mono)
            else:
                terms.append(format_rational(c) + ("*" + mono if mono else ""))
        return " + ".join(terms).replace("+ -", "- ")

    def _coerce(self, other) -> "UniPoly":
        if isinstance(other, UniPoly):
            return other
        return UniPoly([other])

    def __add__(self, other):
        other = self._coerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return UniPoly(self.coeff(k) + other.coeff(k) for k in range(n))

    __radd__ = __add__

    def __neg__(self):
        return UniPoly(-c for c in self.coeffs)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return UniPoly(c * other for c in self.coeffs)
        other = self._coerce(other)
        if not self.coeffs or not other.coeffs:
            return UniPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return UniPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        result = UniPoly([1])
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __divmod__(self, other: "UniPoly"):
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        if len(rem) - 1 < dq:
            return UniPoly(), self
        quot = [Fraction(0)] * (len(rem) - dq)
        inv_lead = 1 / other.lead
        for k in range(len(rem) - 1, dq - 1, -1):
            c = rem[k] * inv_lead
            quot[k - dq] = c
            if c:
                for i, b in enumerate(other.coeffs):
                    rem[k - dq + i] -= c * b
        return UniPoly(quot), UniPoly(rem[:dq])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exact_div(self, other: "UniPoly") -> "UniPoly":
        q, r = divmod(self, other)
        if not r.is_zero():
            raise ArithmeticError("polynomial division is not exact")
        return q

    def derivative(self) -> "UniPoly":
        return UniPoly(k * c for k, c in enumerate(self.coeffs) if k)

    def monic(self) -> "UniPoly":
        if self.is_zero():
            return self
        return self * (1 / self.lead)

    def gcd(self, other: "UniPoly") -> "UniPoly":
        a, b = self, self._coerce(other)
        while not b.is_zero():
            a, b = b, a % b
        return a.monic()

    def squarefree(self) -> "UniPoly":
        """Monic square-free part ``p / gcd(p, p')``."""
        if self.is_zero():
            raise ValueError("zero polynomial has no square-free part")
        if self.degree == 0:
            return UniPoly([1])
        return (self // self.gcd(self.derivative())).monic()

    def sign_at(self, s) -> int:
        v = self(s)
        return (v > 0) - (v < 0)

    def to_json(self) -> list[str]:
        return [format_rational(c) for c in self.coeffs]

    @classmethod
    def from_json(cls, data) -> "UniPoly":
        return cls(parse_rational(str(c)) for c in data)


def _cauchy_bound(p: UniPoly) -> Fraction:
    lead = abs(p.lead)
    return 1 + max(abs(c) for c in p.coeffs[:-1]) / lead if p.degree > 0 else Fraction(1)


def sturm_chain(p: UniPoly) -> list[UniPoly]:
    chain = [p, p.derivative()]
    while not chain[-1].is_zero():
        chain.append(-(chain[-2] % chain[-1]))
    chain.pop()
    return chain


def _variations(chain: Sequence[UniPoly], s) -> int:
    signs = [q.sign_at(s) for q in chain]
    signs = [x for x in signs if x]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def sturm_real_roots(p: UniPoly) -> tuple[int, list[tuple[Fraction, Fraction]]]:
    """Count distinct real roots of ``p`` and isolate each one.

    Returns ``(count, intervals)``; every interval ``(lo, hi)`` contains exactly
    one root.  A degenerate interval ``lo == hi`` is an exact rational root,
    otherwise the root lies strictly between ``lo`` and ``hi``.  Intervals are
    sorted left to right.
    """
    if p.is_zero():
        raise ValueError("the zero polynomial vanishes on the whole real line")
    q = p.squarefree()
    if q.degree == 0:
        return 0, []
    chain = sturm_chain(q)
    bound = _cauchy_bound(q)
    lo, hi = -bound, bound
    total = _variations(chain, lo) - _variations(chain, hi)
    out: list[tuple[Fraction, Fraction]] = []
    # each stack entry has roots in (lo, hi], lo never a root
    stack = [(lo, hi, total)]
    while stack:
        a, b, count = stack.pop()
        if count == 0:
            continue
        if count == 1:
            out.append((b, b) if q(b) == 0 else (a, b))
            continue
        mid = (a + b) / 2
        k = 3
        while q(mid) == 0:
            mid = a + (b - a) / k
            k += 1
        v_mid = _variations(chain, mid)
        stack.append((a, mid, _variations(chain, a) - v_mid))
        stack.append((mid, b, v_mid - _variations(chain, b)))
    out.sort()
    return total, out


def refine_root(p: UniPoly, lo: Fraction, hi: Fraction, width: Fraction) -> tuple[Fraction, Fraction]:
    """Bisect an isolating interval of the square-free ``p`` down to ``width``."""
    if lo == hi:
        return lo, hi
    q = p.squarefree()
    s_lo = q.sign_at(lo)
    if q(hi) == 0:
        return hi, hi
    while hi - lo > width:
        mid = (lo + hi) / 2
        s_mid = q.sign_at(mid)
        if s_mid == 0:
            return mid, mid
        if s_mid == s_lo:
            lo = mid
        else:
            hi = mid
    return lo, hi


def _divisors(n: int, limit: int = 10**12) -> list[int] | None:
    n = abs(n)
    if n > limit:
        return None
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def rational_root_in(p: UniPoly, lo: Fraction, hi: Fraction) -> Fraction | None:
    """Return the rational root of ``p`` in an isolating interval, if the root is rational."""
    if lo == hi:
        return lo if p(lo) == 0 else None
    q = p.squarefree()
    den = 1
    for c in q.coeffs:
        den = den * c.denominator // gcd(den, c.denominator)
    ints = [int(c * den) for c in q.coeffs]
    divs = _divisors(ints[-1])
    if divs is None:
        return None
    lo, hi = refine_root(q, lo, hi, Fraction(1, 2 * divs[-1] + 1))
    if lo == hi:
        return lo
    for d in divs:
        k_lo = -((-lo.numerator * d) // lo.denominator)
        k = k_lo
        while Fraction(k, d) <= hi:
            x = Fraction(k, d)
            if lo < x and q(x) == 0:
                return x
            k += 1
    return None


def _common_denominator(terms: dict) -> tuple[int, list]:
    den = 1
    for c in terms.values():
        q = c.denominator
        if q != 1:
            den = den * q // gcd(den, q)
    return den, [(e, c.numerator * (den // c.denominator)) for e, c in terms.items()]


class MultiPoly:
    """Sparse polynomial in ``nvars`` parameters: {exponent tuple: nonzero Fraction}."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: dict | None = None):
        self.nvars = nvars
        self.terms: dict[tuple[int, ...], Fraction] = {}
        if terms:
            for exp, c in terms.items():
                if len(exp) != nvars:
                    raise ValueError("exponent arity does not match nvars")
                c = rat(c)
                if c:
                    self.terms[tuple(exp)] = c

    @classmethod
    def constant(cls, nvars: int, c) -> "MultiPoly":
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def variable(cls, nvars: int, i: int, c=1) -> "MultiPoly":
        exp = [0] * nvars
        exp[i] = 1
        return cls(nvars, {tuple(exp): c})

    @classmethod
    def linear(cls, const, coeffs: Sequence) -> "MultiPoly":
        """``const + sum(coeffs[i] * t_i)``."""
        nvars = len(coeffs)
        terms = {(0,) * nvars: const}
        for i, c in enumerate(coeffs):
            if c:
                exp = [0] * nvars
                exp[i] = 1
                terms[tuple(exp)] = c
        return cls(nvars, terms)

    def _raw(self, terms: dict) -> "MultiPoly":
        out = MultiPoly.__new__(MultiPoly)
        out.nvars = self.nvars
        out.terms = terms
        return out

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and (0,) * self.nvars in self.terms)

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * self.nvars, Fraction(0))

    @property
    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.nvars == other.nvars and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == MultiPoly.constant(self.nvars, other)
        return NotImplemented

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def __repr__(self):
        return f"MultiPoly({self.nvars}, {{{', '.join(f'{e}: {c}' for e, c in sorted(self.terms.items()))}}})"

    def _coerce(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            if other.nvars != self.nvars:
                raise ValueError("parameter arity mismatch")
            return other
        return MultiPoly.constant(self.nvars, other)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return self._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return self._raw({e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return self._raw({})
            return self._raw({e: c * other for e, c in self.terms.items()})
        other = self._coerce(other)
        if not self.terms or not other.terms:
            return self._raw({})
        # integer numerators over a common denominator; Fraction arithmetic is the bottleneck
        da, na = _common_denominator(self.terms)
        db, nb = _common_denominator(other.terms)
        out: dict = {}
        get = out.get
        for e1, c1 in na:
            for e2, c2 in nb:
                e = tuple(map(add, e1, e2))
                out[e] = get(e, 0) + c1 * c2
        den = da * db
        return self._raw({e: Fraction(c, den) for e, c in out.items() if c})

    __rmul__ = __mul__

    def __call__(self, point: Sequence) -> Fraction:
        if len(point) != self.nvars:
            raise ValueError("point arity does not match nvars")
        acc = Fraction(0)
        for e, c in self.terms.items():
            term = c
            for x, k in zip(point, e):
                if k:
                    term *= x**k
            acc += term
        return acc

    eval = __call__

    def restrict_to_line(self, point: Sequence, direction: Sequence) -> UniPoly:
        """Substitute ``t_i = point_i + s * direction_i`` and return the polynomial in ``s``."""
        lines = [UniPoly([rat(p), rat(d)]) for p, d in zip(point, direction)]
        powers: dict[tuple[int, int], UniPoly] = {}

        def power(i: int, k: int) -> UniPoly:
            key = (i, k)
            if key not in powers:
                powers[key] = lines[i] ** k
            return powers[key]

        acc = UniPoly()
        for e, c in self.terms.items():
            term = UniPoly([c])
            for i, k in enumerate(e):
                if k:
                    term = term * power(i, k)
            acc = acc + term
        return acc

    def to_json(self) -> list:
        return [[list(e), format_rational(c)] for e, c in sorted(self.terms.items())]

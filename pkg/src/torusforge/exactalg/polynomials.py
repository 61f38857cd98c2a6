"""Exact univariate polynomials over Z and Q.

Coefficients are stored in ascending degree order; the zero polynomial is
the empty coefficient sequence.  All arithmetic is exact (Python ints and
``fractions.Fraction``); nothing here ever rounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

from ..errors import EndpointRootError, InvalidInputError

Rat = Union[int, Fraction]

NEG_INF = object()
POS_INF = object()


def _trim(coeffs: list) -> tuple:
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


@dataclass(frozen=True)
class IntPolynomial:
    """Polynomial with arbitrary-precision integer coefficients."""

    coeffs: tuple

    def __init__(self, coeffs: Iterable[int]):
        object.__setattr__(self, "coeffs", _trim([int(c) for c in coeffs]))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1  # -1 for the zero polynomial

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lc(self) -> int:
        if self.is_zero:
            raise InvalidInputError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self) -> "IntPolynomial":
        return IntPolynomial([i * c for i, c in enumerate(self.coeffs)][1:])

    def content(self) -> int:
        """gcd of the coefficients, with the sign of the leading coefficient."""
        g = 0
        for c in self.coeffs:
            g = math.gcd(g, c)
        if g and self.lc < 0:
            g = -g
        return g

    def primitive(self) -> "IntPolynomial":
        if self.is_zero:
            return self
        g = self.content()
        return IntPolynomial([c // g for c in self.coeffs])

    def to_rat(self) -> "RatPolynomial":
        return RatPolynomial(self.coeffs)

    def scale(self, k: int) -> "IntPolynomial":
        return IntPolynomial([k * c for c in self.coeffs])

    def __neg__(self):
        return self.scale(-1)

    def __add__(self, other: "IntPolynomial"):
        n = max(len(self.coeffs), len(other.coeffs))
        a = list(self.coeffs) + [0] * (n - len(self.coeffs))
        b = list(other.coeffs) + [0] * (n - len(other.coeffs))
        return IntPolynomial([x + y for x, y in zip(a, b)])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other: "IntPolynomial"):
        if self.is_zero or other.is_zero:
            return IntPolynomial([])
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return IntPolynomial(out)


@dataclass(frozen=True)
class RatPolynomial:
    """Polynomial with exact rational coefficients in lowest terms."""

    coeffs: tuple

    def __init__(self, coeffs: Iterable[Rat]):
        object.__setattr__(self, "coeffs", _trim([Fraction(c) for c in coeffs]))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lc(self) -> Fraction:
        if self.is_zero:
            raise InvalidInputError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def __call__(self, x):
        # Horner; works for Fraction, mpf and mpc arguments alike
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def eval_rational(self, x: Rat) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self) -> "RatPolynomial":
        return RatPolynomial([i * c for i, c in enumerate(self.coeffs)][1:])

    def monic(self) -> "RatPolynomial":
        if self.is_zero:
            raise InvalidInputError("cannot normalize the zero polynomial")
        c = self.lc
        return RatPolynomial([a / c for a in self.coeffs])

    def content_and_primitive(self):
        """Split f = content * primitive with primitive an integer polynomial
        of positive leading coefficient and coprime coefficients."""
        if self.is_zero:
            return Fraction(0), IntPolynomial([])
        den = math.lcm(*[c.denominator for c in self.coeffs])
        ints = [int(c * den) for c in self.coeffs]
        g = 0
        for c in ints:
            g = math.gcd(g, c)
        if ints[-1] < 0:
            g = -g
        return Fraction(g, den), IntPolynomial([c // g for c in ints])

    def primitive(self) -> IntPolynomial:
        return self.content_and_primitive()[1]

    def scale(self, k: Rat) -> "RatPolynomial":
        k = Fraction(k)
        return RatPolynomial([k * c for c in self.coeffs])

    def __neg__(self):
        return self.scale(-1)

    def __add__(self, other: "RatPolynomial"):
        n = max(len(self.coeffs), len(other.coeffs))
        a = list(self.coeffs) + [Fraction(0)] * (n - len(self.coeffs))
        b = list(other.coeffs) + [Fraction(0)] * (n - len(other.coeffs))
        return RatPolynomial([x + y for x, y in zip(a, b)])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other: "RatPolynomial"):
        if self.is_zero or other.is_zero:
            return RatPolynomial([])
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return RatPolynomial(out)

    def divmod(self, other: "RatPolynomial"):
        if other.is_zero:
            raise InvalidInputError("division by the zero polynomial")
        q = [Fraction(0)] * max(0, self.degree - other.degree + 1)
        r = list(self.coeffs)
        d, lc = other.degree, other.lc
        while len(r) - 1 >= d and any(r):
            while r and r[-1] == 0:
                r.pop()
            if len(r) - 1 < d:
                break
            k = len(r) - 1 - d
            c = r[-1] / lc
            q[k] = c
            for i, oc in enumerate(other.coeffs):
                r[k + i] -= c * oc
            r.pop()
        return RatPolynomial(q), RatPolynomial(r)

    def __mod__(self, other):
        return self.divmod(other)[1]


def as_rat(f) -> RatPolynomial:
    if isinstance(f, RatPolynomial):
        return f
    if isinstance(f, IntPolynomial):
        return f.to_rat()
    return RatPolynomial(f)


def poly_gcd(f: RatPolynomial, g: RatPolynomial) -> RatPolynomial:
    """Monic gcd over Q (the zero polynomial if both inputs are zero)."""
    a, b = as_rat(f), as_rat(g)
    while not b.is_zero:
        a, b = b, a % b
    return a.monic() if not a.is_zero else a


def squarefree_part(f: RatPolynomial) -> RatPolynomial:
    f = as_rat(f)
    if f.degree <= 0:
        return f
    g = poly_gcd(f, f.derivative())
    if g.degree == 0:
        return f
    return f.divmod(g)[0]


def cauchy_root_bound(f: RatPolynomial) -> Fraction:
    """1 + max |a_i / a_n|: every complex root has modulus below this."""
    f = as_rat(f)
    if f.is_zero:
        raise InvalidInputError("zero polynomial")
    lc = abs(f.lc)
    m = max((abs(c) for c in f.coeffs[:-1]), default=Fraction(0))
    return 1 + m / lc


# ---------------------------------------------------------------------------
# Sturm sequences


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def sturm_chain(f: RatPolynomial) -> list:
    """Sturm chain of the squarefree part of f, as primitive integer
    polynomials (each step is rescaled by its positive content to control
    coefficient growth; positive rescaling preserves the sign sequence)."""
    f = squarefree_part(as_rat(f))
    chain = [f.primitive(), f.derivative().primitive()]
    while not chain[-1].is_zero and chain[-1].degree > 0:
        r = chain[-2].to_rat() % chain[-1].to_rat()
        if r.is_zero:
            break
        _, prim = (-r).content_and_primitive()
        # content_and_primitive normalizes lc > 0; restore the sign of -r
        if (-r).lc < 0:
            prim = -prim
        chain.append(prim)
    return chain


def _variations(signs: Sequence[int]) -> int:
    nz = [s for s in signs if s != 0]
    return sum(1 for a, b in zip(nz, nz[1:]) if a != b)


def _chain_signs_at(chain, x) -> list:
    if x is NEG_INF:
        return [_sign(p.lc) * (-1) ** p.degree for p in chain if not p.is_zero]
    if x is POS_INF:
        return [_sign(p.lc) for p in chain if not p.is_zero]
    return [_sign(p.to_rat().eval_rational(x)) for p in chain if not p.is_zero]


def sturm_count(f, lo=NEG_INF, hi=POS_INF) -> int:
    """Exact number of distinct real roots of f in the open interval (lo, hi).

    Endpoints may be rationals or the NEG_INF / POS_INF sentinels.  Finite
    endpoints must not be roots (EndpointRootError otherwise; the caller
    perturbs, e.g. by 1/(1 + denominator of the Cauchy bound)).
    """
    f = as_rat(f)
    if f.is_zero:
        raise InvalidInputError("sturm_count of the zero polynomial")
    if isinstance(lo, float) and math.isinf(lo):
        lo = NEG_INF if lo < 0 else POS_INF
    if isinstance(hi, float) and math.isinf(hi):
        hi = POS_INF if hi > 0 else NEG_INF
    if f.degree == 0:
        return 0
    for endpoint in (lo, hi):
        if endpoint not in (NEG_INF, POS_INF) and f.eval_rational(Fraction(endpoint)) == 0:
            raise EndpointRootError(f"endpoint {endpoint} is a root")
    if lo is not NEG_INF and hi is not POS_INF and not Fraction(lo) < Fraction(hi):
        raise InvalidInputError("require lo < hi")
    if lo is POS_INF or hi is NEG_INF:
        raise InvalidInputError("interval is empty")
    chain = sturm_chain(f)
    lo_key = lo if lo is NEG_INF else Fraction(lo)
    hi_key = hi if hi is POS_INF else Fraction(hi)
    return _variations(_chain_signs_at(chain, lo_key)) - _variations(
        _chain_signs_at(chain, hi_key)
    )


# ---------------------------------------------------------------------------
# Resultants and discriminants


def resultant(f, g) -> Fraction:
    """Exact resultant of two nonzero polynomials over Q.

    Euclidean polynomial remainder sequence with the classical multiplier
    bookkeeping Res(f, g) = (-1)^(deg f * deg g) lc(g)^(deg f - deg r) Res(g, r).
    """
    f, g = as_rat(f), as_rat(g)
    if f.is_zero or g.is_zero:
        raise InvalidInputError("resultant of the zero polynomial")
    acc = Fraction(1)
    while True:
        if g.degree == 0:
            return acc * g.lc**f.degree
        if f.degree < g.degree:
            if (f.degree * g.degree) % 2:
                acc = -acc
            f, g = g, f
            continue
        r = f % g
        if r.is_zero:
            return Fraction(0)
        if (f.degree * g.degree) % 2:
            acc = -acc
        acc *= g.lc ** (f.degree - r.degree)
        f, g = g, r


def discriminant(f) -> Fraction:
    """(-1)^(n(n-1)/2) Res(f, f') / lc(f)."""
    f = as_rat(f)
    if f.is_zero or f.degree < 1:
        raise InvalidInputError("discriminant needs degree >= 1")
    n = f.degree
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    return sign * resultant(f, f.derivative()) / f.lc


# ---------------------------------------------------------------------------
# Newton polygons


def padic_valuation(x: Rat, p: int) -> int:
    """v_p of a nonzero rational."""
    x = Fraction(x)
    if x == 0:
        raise InvalidInputError("valuation of zero")
    v = 0
    num, den = x.numerator, x.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


@dataclass(frozen=True)
class PolygonSegment:
    slope: Fraction
    start: tuple
    end: tuple
    interior_lattice_points: int


@dataclass(frozen=True)
class NewtonPolygon:
    """Lower convex hull of (i, v_p(a_i)) over the nonzero coefficients."""

    prime: int
    vertices: tuple  # of (int, Fraction)
    segments: tuple  # of PolygonSegment

    @property
    def single_segment(self) -> bool:
        return len(self.segments) == 1


def _interior_lattice_points(p0, p1) -> int:
    (x0, y0), (x1, y1) = p0, p1
    count = 0
    for t in range(x0 + 1, x1):
        y = y0 + (y1 - y0) * Fraction(t - x0, x1 - x0)
        if y.denominator == 1:
            count += 1
    return count


def newton_polygon(f, p: int) -> NewtonPolygon:
    """Newton polygon of f with respect to the prime p."""
    f = as_rat(f)
    if f.is_zero:
        raise InvalidInputError("newton polygon of the zero polynomial")
    pts = [
        (i, Fraction(padic_valuation(c, p)))
        for i, c in enumerate(f.coeffs)
        if c != 0
    ]
    # lower convex hull, left to right (monotone chain keeping clockwise turns)
    hull = []
    for pt in pts:
        while len(hull) >= 2:
            (x0, y0), (x1, y1) = hull[-2], hull[-1]
            if (x1 - x0) * (pt[1] - y0) <= (pt[0] - x0) * (y1 - y0):
                hull.pop()
            else:
                break
        hull.append(pt)
    segments = tuple(
        PolygonSegment(
            slope=Fraction(b[1] - a[1], b[0] - a[0]),
            start=a,
            end=b,
            interior_lattice_points=_interior_lattice_points(a, b),
        )
        for a, b in zip(hull, hull[1:])
    )
    return NewtonPolygon(prime=p, vertices=tuple(hull), segments=segments)

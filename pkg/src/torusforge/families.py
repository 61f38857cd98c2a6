"""Explicit polynomial families giving purely imaginary fields without
proper subfields: truncated exponentials, the trinomials x^2g + x + 1, and
the two-parameter trinomial family attached to admissible quadruples.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional

from mpmath import mp

from .errors import (
    InvalidInputError,
    InvalidQuadrupleError,
    UnsupportedParameterError,
)
from .exactalg import (
    IntPolynomial,
    RatPolynomial,
    is_prime,
    primes_from,
    primitive_root_check,
    sturm_count,
)

# ---------------------------------------------------------------------------
# truncated exponentials


def truncated_exponential(n: int) -> RatPolynomial:
    """sum_{j<=n} x^j / j!"""
    if n < 1:
        raise InvalidInputError("need n >= 1")
    return RatPolynomial([Fraction(1, math.factorial(j)) for j in range(n + 1)])


def truncated_exponential_scaled(n: int) -> IntPolynomial:
    """The primitive integer rescaling n! * sum x^j / j! (monic)."""
    if n < 1:
        raise InvalidInputError("need n >= 1")
    nf = math.factorial(n)
    return IntPolynomial([nf // math.factorial(j) for j in range(n + 1)])


# ---------------------------------------------------------------------------
# x^2g + x + 1


def selmer(g: int) -> IntPolynomial:
    """x^(2g) + x + 1, irreducible for g not congruent to 1 mod 3.

    For g = 1 (mod 3) the trinomial is divisible by x^2 + x + 1 and is
    rejected outright rather than warned about: downstream certificates
    would be vacuous.
    """
    if g < 2:
        raise InvalidInputError("need g >= 2")
    if g % 3 == 1:
        raise UnsupportedParameterError(
            f"g = {g} is 1 mod 3: x^2+x+1 divides x^{2 * g}+x+1"
        )
    return IntPolynomial([1, 1] + [0] * (2 * g - 2) + [1])


# ---------------------------------------------------------------------------
# admissible quadruples


@dataclass(frozen=True)
class AdmissibleQuadruple:
    """Parameters (g, l, p, b, c) of the trinomial x^2g - b x - p c / l^l."""

    g: int
    l: int
    p: int
    b: int
    c: int

    def violated_predicates(self) -> list:
        bad = []
        if self.g < 2:
            bad.append("g >= 2")
        if not is_prime(self.l):
            bad.append("l prime")
        elif (2 * self.g - 1) % self.l:
            bad.append("l divides 2g-1")
        if not is_prime(self.p):
            bad.append("p prime")
        elif (self.p - 1) % (2 * self.g - 1):
            bad.append("p = 1 mod 2g-1")
        if is_prime(self.l) and self.b % self.l == 0:
            bad.append("l does not divide b")
        if is_prime(self.p):
            if math.gcd(self.b, self.p) != 1 or not primitive_root_check(self.b, self.p):
                bad.append("b primitive root mod p")
        if is_prime(self.l) and self.c % self.l == 0:
            bad.append("l does not divide c")
        return bad

    def validate(self) -> "AdmissibleQuadruple":
        bad = self.violated_predicates()
        if bad:
            raise InvalidQuadrupleError(bad[0], "; ".join(bad))
        return self

    def as_tuple(self) -> tuple:
        return (self.g, self.l, self.p, self.b, self.c)


def _trinomial(g: int, l: int, p: int, b: int, c: int) -> RatPolynomial:
    coeffs = [Fraction(-p * c, l**l), Fraction(-b)] + [Fraction(0)] * (2 * g - 2) + [Fraction(1)]
    return RatPolynomial(coeffs)


def quadruple_polynomial(q: AdmissibleQuadruple) -> RatPolynomial:
    """x^2g - b x - p c / l^l for a validated admissible quadruple."""
    q.validate()
    return _trinomial(q.g, q.l, q.p, q.b, q.c)


# ---------------------------------------------------------------------------
# the real-root threshold in c


@dataclass(frozen=True)
class ThresholdReport:
    """Both closed-form thresholds for the largest c avoiding real roots.

    The minimum of the trinomial sits at the unique real critical point
    beta = (b/2g)^(1/(2g-1)), where the value is beta*(b/2g - b) - pc/l^l;
    published_factor_threshold uses the factor (b/2g - 1) instead of
    (b/2g - b) and does not match the exact Sturm count, which is treated
    as ground truth (sturm_max_c).
    """

    g: int
    l: int
    p: int
    b: int
    corrected_factor_threshold: object  # mpf at 128 bits
    published_factor_threshold: object  # mpf at 128 bits
    sturm_max_c: int


def _thresholds(g: int, l: int, p: int, b: int):
    with mp.workprec(160):
        beta = mp.sign(b) * (abs(mp.mpf(b)) / (2 * g)) ** (mp.mpf(1) / (2 * g - 1))
        common = mp.mpf(l) ** l / p * beta
        corrected = common * (mp.mpf(b) / (2 * g) - b)
        published = common * (mp.mpf(b) / (2 * g) - 1)
        return corrected, published


def max_c_without_real_roots(g: int, l: int, p: int, b: int) -> int:
    """Largest integer c for which x^2g - b x - pc/l^l has no real roots,
    determined by exact Sturm counts (bisection around the floating
    closed-form estimate, so the closed form is never trusted)."""
    _validate_quadruple_head(g, l, p, b)
    corrected, _ = _thresholds(g, l, p, b)
    c = int(mp.floor(corrected))
    # exact walk: largest c with zero real roots
    while sturm_count(_trinomial(g, l, p, b, c)) != 0:
        c -= 1
    while sturm_count(_trinomial(g, l, p, b, c + 1)) == 0:
        c += 1
    return c


def real_root_threshold_report(g: int, l: int, p: int, b: int) -> ThresholdReport:
    corrected, published = _thresholds(g, l, p, b)
    return ThresholdReport(
        g=g,
        l=l,
        p=p,
        b=b,
        corrected_factor_threshold=corrected,
        published_factor_threshold=published,
        sturm_max_c=max_c_without_real_roots(g, l, p, b),
    )


def _validate_quadruple_head(g, l, p, b):
    probe = AdmissibleQuadruple(g=g, l=l, p=p, b=b, c=1 if l != 1 else 1)
    bad = [x for x in probe.violated_predicates() if "divide c" not in x]
    if bad:
        raise InvalidQuadrupleError(bad[0], "; ".join(bad))


def adjust_c(c: int, g: int, l: int, p: int, b: int, ell: Optional[int] = None) -> int:
    """Decrease c by multiples of l*p (or l*p*ell^2) until the trinomial has
    no real roots; minimal number of steps, so a c that already works is
    returned unchanged.  The result keeps the residue of c mod l (and mod
    ell^2 when ell is given)."""
    _validate_quadruple_head(g, l, p, b)
    if c % l == 0:
        raise InvalidQuadrupleError("l does not divide c")
    step = l * p
    if ell is not None:
        if (l * p) % ell == 0:
            raise InvalidInputError("ell must not divide l*p")
        step *= ell * ell
    while sturm_count(_trinomial(g, l, p, b, c)) != 0:
        c -= step
    return c


# ---------------------------------------------------------------------------
# enumeration


@dataclass(frozen=True)
class SearchBudget:
    """Bounds for quadruple enumeration: primes p <= p_max, c >= c_min."""

    p_max: int
    c_min: int = -(10**4)


@dataclass(frozen=True)
class FamilySpec:
    """Which family, which dimension, and (for quadruples) the parameters."""

    kind: str  # truncated-exponential | selmer | quadruple
    g: int
    quadruple: Optional[AdmissibleQuadruple] = None

    def polynomial(self) -> RatPolynomial:
        if self.kind == "truncated-exponential":
            return truncated_exponential(2 * self.g)
        if self.kind == "selmer":
            return selmer(self.g).to_rat()
        if self.kind == "quadruple":
            return quadruple_polynomial(self.quadruple)
        raise InvalidInputError(f"unknown family kind {self.kind}")

    def to_json_dict(self) -> dict:
        out = {"schema": "torus-forge/1", "kind": self.kind, "g": self.g}
        if self.quadruple is not None:
            q = self.quadruple
            out["quadruple"] = [q.l, q.p, q.b, q.c]
        return out

    @classmethod
    def from_json_dict(cls, d: dict) -> "FamilySpec":
        quad = None
        if d.get("quadruple"):
            l, p, b, c = d["quadruple"]
            quad = AdmissibleQuadruple(g=d["g"], l=l, p=p, b=b, c=c)
        return cls(kind=d["kind"], g=d["g"], quadruple=quad)


def enumerate_quadruples(g: int, budget: SearchBudget) -> Iterator[AdmissibleQuadruple]:
    """Deterministic stream of admissible quadruples whose trinomials are
    real-root-free.

    Order: p ascending over primes = 1 mod 2g-1, then b ascending over
    1..p-1 (skipping multiples of l and non-primitive-roots), then l
    ascending over prime divisors of 2g-1, then c descending from the exact
    Sturm maximum (skipping multiples of l) down to budget.c_min.
    """
    if g < 2:
        raise InvalidInputError("need g >= 2")
    ells = [l for l in range(2, 2 * g) if (2 * g - 1) % l == 0 and is_prime(l)]
    for p in primes_from(2):
        if p > budget.p_max:
            return
        if (p - 1) % (2 * g - 1):
            continue
        for b in range(1, p):
            if math.gcd(b, p) != 1 or not primitive_root_check(b, p):
                continue
            for l in ells:
                if b % l == 0:
                    continue
                c = max_c_without_real_roots(g, l, p, b)
                while c >= budget.c_min:
                    if c % l:
                        yield AdmissibleQuadruple(g=g, l=l, p=p, b=b, c=c).validate()
                    c -= 1

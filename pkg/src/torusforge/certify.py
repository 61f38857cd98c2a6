"""Machine-checkable certificates: no real roots, irreducibility, Galois
cycle-type witnesses, primitivity, absence of proper subfields, torsion
units, and the bundled certificate that a polynomial defines a torus with
field endomorphism algebra.

Certification is one-sided and three-valued: cycle-type witnesses can only
prove a Galois group large, so the outcomes are certified / refuted /
inconclusive, and inconclusive never means refuted.  Every certificate is
re-checkable from its own evidence without re-running the search that
found it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

from .canon import content_hash, poly_hash, poly_to_json, rat_str
from .errors import DependencyError, InvalidInputError
from .exactalg import (
    RatPolynomial,
    as_rat,
    discriminant,
    divisors,
    euler_phi,
    factor_degree_pattern,
    is_prime,
    newton_polygon,
    poly_gcd,
    primes_from,
    sturm_count,
)

CERTIFIED = "certified"
REFUTED = "refuted"
INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class Certificate:
    """Tagged proof object for one hypothesis about one polynomial.

    subject is the content hash of the polynomial; evidence is a JSON-safe
    payload from which verify_certificate re-derives the claim.
    """

    kind: str
    subject: str
    outcome: str
    evidence: dict

    @property
    def verified(self) -> bool:
        return self.outcome == CERTIFIED

    def to_json_dict(self) -> dict:
        return {
            "schema": "torus-forge/1",
            "kind": self.kind,
            "subject": self.subject,
            "outcome": self.outcome,
            "evidence": self.evidence,
        }

    @property
    def hash(self) -> str:
        return content_hash(self.to_json_dict())

    @classmethod
    def from_json_dict(cls, d: dict) -> "Certificate":
        return cls(kind=d["kind"], subject=d["subject"], outcome=d["outcome"], evidence=d["evidence"])


# ---------------------------------------------------------------------------
# witness prime schedules


def _squarefree_witnesses(f, prime_budget) -> Iterable:
    """Stream of squarefree FactorPatterns.

    An int budget n (default 100) spends itself on the first n primes above
    max(deg f, 10) whose reduction is squarefree (a hard cap of 40n scanned
    primes guards against polynomials with a square factor over Q, where no
    reduction is ever squarefree); an explicit iterable is scanned verbatim.
    """
    f = as_rat(f)
    if prime_budget is None:
        prime_budget = 100
    if isinstance(prime_budget, int):
        found = scanned = 0
        for p in primes_from(max(f.degree, 10) + 1):
            if found >= prime_budget or scanned >= 40 * prime_budget:
                return
            scanned += 1
            try:
                pat = factor_degree_pattern(f, p)
            except InvalidInputError:
                continue
            if pat.squarefree:
                found += 1
                yield pat
    else:
        for p in prime_budget:
            try:
                pat = factor_degree_pattern(f, p)
            except InvalidInputError:
                continue
            if pat.squarefree:
                yield pat


# ---------------------------------------------------------------------------
# purely imaginary


def certify_purely_imaginary(f) -> Certificate:
    """No-real-roots certificate via an exact Sturm count over (-inf, inf)."""
    f = as_rat(f)
    if f.is_zero or f.degree < 1:
        raise InvalidInputError("need a nonconstant polynomial")
    if f.degree % 2:
        raise InvalidInputError("odd-degree real polynomial always has a real root")
    count = sturm_count(f)
    return Certificate(
        kind="PurelyImaginary",
        subject=poly_hash(f),
        outcome=CERTIFIED if count == 0 else REFUTED,
        evidence={
            "real_root_count": count,
            "interval": ["-inf", "inf"],
            "method": "sturm",
            "degree": f.degree,
        },
    )


# ---------------------------------------------------------------------------
# irreducibility


def _rational_roots(f) -> list:
    """All rational roots of f, by the exhaustive divisor test on the
    primitive integer form."""
    fp = as_rat(f).primitive()
    if fp.coeffs[0] == 0:
        return [Fraction(0)]
    roots = []
    for num in divisors(fp.coeffs[0]):
        for den in divisors(fp.lc):
            for s in (1, -1):
                cand = Fraction(s * num, den)
                if fp.to_rat().eval_rational(cand) == 0 and cand not in roots:
                    roots.append(cand)
    return roots


def _subset_sums(degrees) -> set:
    sums = {0}
    for d in degrees:
        sums |= {s + d for s in sums}
    return sums


def _eisenstein_dumas_primes(f) -> list:
    """Candidate primes: those dividing the numerator or denominator of the
    constant term or any coefficient denominator."""
    f = as_rat(f)
    cand = set()
    for c in f.coeffs:
        if c != 0:
            cand |= set(_small_prime_factors(c.denominator))
    c0 = f.coeffs[0]
    if c0 != 0:
        cand |= set(_small_prime_factors(c0.numerator))
    return sorted(cand)


def _small_prime_factors(n: int, bound: int = 10**6) -> list:
    n = abs(n)
    out = []
    d = 2
    while d * d <= n and d <= bound:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1 if d == 2 else 2
    if 1 < n <= bound:
        out.append(n)
    return out


def _try_eisenstein_dumas(f, prime: int) -> Optional[dict]:
    """Single Newton segment whose endpoints are its only lattice points
    certifies irreducibility over the prime's local field, hence over Q."""
    poly = newton_polygon(f, prime)
    if not poly.single_segment:
        return None
    seg = poly.segments[0]
    (x0, y0), (x1, y1) = seg.start, seg.end
    if y0.denominator != 1 or y1.denominator != 1:
        return None
    if x0 != 0 or x1 != as_rat(f).degree:
        return None
    if seg.interior_lattice_points != 0 or y0 == y1:
        return None
    return {
        "route": "eisenstein-dumas",
        "prime": prime,
        "segment": {
            "start": [x0, rat_str(y0)],
            "end": [x1, rat_str(y1)],
            "interior_lattice_points": 0,
        },
    }


def certify_irreducible(f, hint_primes=(), prime_budget=100) -> Certificate:
    """Irreducibility certificate over Q, by the first route that fires:

    (a) Eisenstein-Dumas at a prime dividing the constant term or a
        coefficient denominator (hint_primes are tried first);
    (b) a witness prime where the reduction is irreducible;
    (c) a set of squarefree witness patterns admitting no common degree
        split, plus the exhaustive rational-root test for linear factors.

    A rational root refutes; an exhausted budget is inconclusive.
    """
    f = as_rat(f)
    n = f.degree
    if n < 1:
        raise InvalidInputError("need degree >= 1")
    subject = poly_hash(f)
    if n == 1:
        return Certificate("Irreducible", subject, CERTIFIED, {"route": "linear"})

    if poly_gcd(f, f.derivative()).degree > 0:
        return Certificate(
            "Irreducible", subject, REFUTED, {"route": "repeated-factor"}
        )
    roots = _rational_roots(f)
    if roots:
        return Certificate(
            "Irreducible",
            subject,
            REFUTED,
            {"route": "rational-root", "root": rat_str(roots[0])},
        )

    for prime in list(hint_primes) + _eisenstein_dumas_primes(f):
        ev = _try_eisenstein_dumas(f, prime)
        if ev:
            return Certificate("Irreducible", subject, CERTIFIED, ev)

    patterns = []
    for pat in _squarefree_witnesses(f, prime_budget):
        p = pat.prime
        if pat.degrees == (n,):
            return Certificate(
                "Irreducible",
                subject,
                CERTIFIED,
                {"route": "modular-pattern", "prime": p, "degrees": [n]},
            )
        patterns.append(pat)
        excluded = _excluded_degrees(n, patterns)
        if all(d in excluded for d in range(1, n // 2 + 1)):
            return Certificate(
                "Irreducible",
                subject,
                CERTIFIED,
                {
                    "route": "pattern-intersection",
                    "witnesses": [[q.prime, list(q.degrees)] for q in patterns],
                    "rational_roots_excluded": True,
                    "excluded_degrees": {str(d): excluded[d] for d in excluded},
                },
            )
    return Certificate(
        "Irreducible",
        subject,
        INCONCLUSIVE,
        {"route": "budget-exhausted", "witnesses": [[q.prime, list(q.degrees)] for q in patterns]},
    )


def _excluded_degrees(n: int, patterns) -> dict:
    """Map degree d -> witness prime whose pattern admits no sub-multiset
    summing to d.  Degree 1 is always excluded here because the rational
    root test ran first."""
    out = {1: 0}  # 0 marks the rational-root test
    for d in range(2, n // 2 + 1):
        for pat in patterns:
            if d not in _subset_sums(pat.degrees):
                out[d] = pat.prime
                break
    return out


# ---------------------------------------------------------------------------
# cycle-type witnesses and primitivity


def frobenius_scan(f, prime_budget=None, require_irreducible: Optional[Certificate] = None) -> list:
    """Cycle-type witnesses: for squarefree reductions, the factor degree
    multiset is the cycle type of an element of the Galois group.  Witness
    primes never divide disc(f) (non-squarefree reductions are skipped).
    The interpretation requires irreducibility of f, certified separately."""
    f = as_rat(f)
    subject = poly_hash(f)
    if require_irreducible is not None and not require_irreducible.verified:
        raise DependencyError("irreducibility certificate is not verified")
    out = [
        Certificate(
            "CycleTypeWitness",
            subject,
            CERTIFIED,
            {"prime": pat.prime, "degrees": list(pat.degrees)},
        )
        for pat in _squarefree_witnesses(f, prime_budget)
    ]
    out.sort(key=lambda c: c.evidence["prime"])
    return out


def _is_rational_square(x: Fraction) -> bool:
    if x < 0:
        return False
    return (
        math.isqrt(x.numerator) ** 2 == x.numerator
        and math.isqrt(x.denominator) ** 2 == x.denominator
    )


def certify_primitive(
    f,
    irreducible: Optional[Certificate] = None,
    prime_budget=None,
    assume_irreducible: bool = False,
) -> Certificate:
    """Primitivity of the Galois group, from either of two witnesses:

    (a) a cycle type {1, n-1}: an (n-1)-cycle in a transitive group makes it
        doubly transitive, and doubly transitive groups are primitive;
    (b) a cycle type {p, 1, ..., 1} for a prime p with n/2 < p < n-2: a
        transitive group containing such a p-cycle is the alternating or
        full symmetric group, hence primitive.

    Irreducibility supplies transitivity, so a verified Irreducible
    certificate is required (assume_irreducible=True is a diagnostic
    bypass).  Whether disc(f) is a square (group inside the alternating
    group) is recorded as metadata only.
    """
    f = as_rat(f)
    n = f.degree
    subject = poly_hash(f)
    if not assume_irreducible:
        if irreducible is None:
            irreducible = certify_irreducible(f, prime_budget=prime_budget if isinstance(prime_budget, int) else 100)
        if not irreducible.verified:
            raise DependencyError("need a verified Irreducible certificate (transitivity)")

    disc_square = _is_rational_square(discriminant(f))
    for witness in frobenius_scan(f, prime_budget):
        degrees = tuple(witness.evidence["degrees"])
        p = witness.evidence["prime"]
        if sorted(degrees) == sorted([1, n - 1]) and n >= 3:
            return Certificate(
                "Primitive",
                subject,
                CERTIFIED,
                {
                    "route": "doubly-transitive",
                    "witness_prime": p,
                    "degrees": list(degrees),
                    "discriminant_is_square": disc_square,
                    "irreducible": None if irreducible is None else irreducible.hash,
                },
            )
        cycle = _long_prime_cycle(n, degrees)
        if cycle is not None:
            return Certificate(
                "Primitive",
                subject,
                CERTIFIED,
                {
                    "route": "large-prime-cycle",
                    "witness_prime": p,
                    "degrees": list(degrees),
                    "cycle_length": cycle,
                    "discriminant_is_square": disc_square,
                    "irreducible": None if irreducible is None else irreducible.hash,
                },
            )
    return Certificate(
        "Primitive",
        subject,
        INCONCLUSIVE,
        {"route": "budget-exhausted", "discriminant_is_square": disc_square},
    )


def _long_prime_cycle(n: int, degrees) -> Optional[int]:
    nontrivial = [d for d in degrees if d > 1]
    if len(nontrivial) != 1:
        return None
    q = nontrivial[0]
    if is_prime(q) and 2 * q > n and q < n - 2:
        return q
    return None


def certify_doubly_transitive(f, prime_budget=None) -> Certificate:
    """Standalone witness that the group is doubly transitive (an (n-1)-cycle
    exists); used as a component of route (a) primitivity."""
    f = as_rat(f)
    n = f.degree
    subject = poly_hash(f)
    for witness in frobenius_scan(f, prime_budget):
        degrees = tuple(witness.evidence["degrees"])
        if sorted(degrees) == sorted([1, n - 1]) and n >= 3:
            return Certificate(
                "DoublyTransitive",
                subject,
                CERTIFIED,
                {"witness_prime": witness.evidence["prime"], "degrees": list(degrees)},
            )
    return Certificate("DoublyTransitive", subject, INCONCLUSIVE, {"route": "budget-exhausted"})


# ---------------------------------------------------------------------------
# subfields and torsion units


def certify_no_proper_subfield(f, irreducible: Certificate, primitive: Certificate) -> Certificate:
    """No proper subfield except Q: subfields of Q[x]/f correspond to
    overgroups of a point stabilizer, so transitivity (irreducible) plus
    primitivity leaves no room between Q and the field."""
    f = as_rat(f)
    subject = poly_hash(f)
    for cert, name in ((irreducible, "Irreducible"), (primitive, "Primitive")):
        if cert is None or not cert.verified:
            raise DependencyError(f"need a verified {name} certificate")
        if cert.subject != subject:
            raise DependencyError(f"{name} certificate is about a different polynomial")
    return Certificate(
        "NoProperSubfield",
        subject,
        CERTIFIED,
        {
            "irreducible": irreducible.to_json_dict(),
            "primitive": primitive.to_json_dict(),
        },
    )


def torsion_sanity_gcds(f) -> dict:
    """gcd(f, x^m - 1) degree for every m with phi(m) = deg f: a nonzero
    degree means f has a root of unity of order m as a root (the field is
    cyclotomic), which no-proper-subfield forbids at degree >= 4."""
    f = as_rat(f)
    n = f.degree
    out = {}
    for m in range(3, 2 * n * n + 2):
        if euler_phi(m) == n:
            xm1 = RatPolynomial([-1] + [0] * (m - 1) + [1])
            out[m] = poly_gcd(f, xm1).degree
    return out


def certify_torsion_units(f, no_proper_subfield: Certificate) -> Certificate:
    """The only roots of unity in the field are 1 and -1.

    Logical route: a root of unity of order m > 2 generates a subfield of
    degree phi(m); phi(m) = 2 contradicts no-proper-subfield directly,
    2 < phi(m) < 2g is a proper intermediate field, and phi(m) = 2g would
    make the whole field cyclotomic, which contains a real subfield of
    degree g >= 2.  The gcd sanity check covers the last case explicitly.
    """
    f = as_rat(f)
    n = f.degree
    subject = poly_hash(f)
    if n < 4 or n % 2:
        raise InvalidInputError("torsion-unit certification needs even degree >= 4")
    if no_proper_subfield is None or not no_proper_subfield.verified:
        raise DependencyError("need a verified NoProperSubfield certificate")
    if no_proper_subfield.subject != subject:
        raise DependencyError("NoProperSubfield certificate is about a different polynomial")
    gcds = torsion_sanity_gcds(f)
    if any(d > 0 for d in gcds.values()):
        bad = next(m for m, d in gcds.items() if d > 0)
        return Certificate(
            "TorsionUnits",
            subject,
            REFUTED,
            {"cyclotomic_order": bad, "sanity_gcd_degrees": {str(m): d for m, d in gcds.items()}},
        )
    return Certificate(
        "TorsionUnits",
        subject,
        CERTIFIED,
        {
            "units": ["1", "-1"],
            "sanity_gcd_degrees": {str(m): d for m, d in gcds.items()},
            "no_proper_subfield": no_proper_subfield.hash,
        },
    )


# ---------------------------------------------------------------------------
# the bundle


@dataclass(frozen=True)
class SpecialResult:
    """Outcome of the full certification chain for one polynomial."""

    outcome: str
    bundle: Optional[Certificate]
    components: dict
    failed_stage: Optional[str]


def certify_special(f, prime_budget=100, hint_primes=(), family_metadata: Optional[dict] = None) -> SpecialResult:
    """Run the whole chain: irreducible, purely imaginary, primitive, no
    proper subfield, torsion units; bundle them with the predicted torus
    conclusions (field endomorphisms of degree 2g, rank-0 Neron-Severi and
    Hom(T, T-dual), automorphisms {+-1} x Z^(g-1))."""
    f = as_rat(f)
    n = f.degree
    if n < 4 or n % 2:
        raise InvalidInputError("need even degree >= 4")
    g = n // 2
    subject = poly_hash(f)
    components: dict = {}

    irr = certify_irreducible(f, hint_primes=hint_primes, prime_budget=prime_budget)
    components["Irreducible"] = irr
    if not irr.verified:
        return SpecialResult(irr.outcome, None, components, "Irreducible")

    pim = certify_purely_imaginary(f)
    components["PurelyImaginary"] = pim
    if not pim.verified:
        return SpecialResult(pim.outcome, None, components, "PurelyImaginary")

    prim = certify_primitive(f, irreducible=irr, prime_budget=prime_budget)
    components["Primitive"] = prim
    if not prim.verified:
        return SpecialResult(prim.outcome, None, components, "Primitive")

    npsf = certify_no_proper_subfield(f, irr, prim)
    components["NoProperSubfield"] = npsf

    tor = certify_torsion_units(f, npsf)
    components["TorsionUnits"] = tor
    if not tor.verified:
        return SpecialResult(tor.outcome, None, components, "TorsionUnits")

    evidence = {
        "g": g,
        "polynomial": poly_to_json(f),
        "components": {
            "Irreducible": irr.to_json_dict(),
            "PurelyImaginary": pim.to_json_dict(),
            "NoProperSubfield": npsf.to_json_dict(),
            "TorsionUnits": tor.to_json_dict(),
        },
        "conclusions": {
            "endomorphism_field_degree": 2 * g,
            "neron_severi_rank": 0,
            "hom_dual_rank": 0,
            "automorphisms": {"torsion_order": 2, "free_rank": g - 1},
        },
    }
    if family_metadata:
        evidence["family"] = family_metadata
    bundle = Certificate("SpecialTorus", subject, CERTIFIED, evidence)
    components["SpecialTorus"] = bundle
    return SpecialResult(CERTIFIED, bundle, components, None)


# ---------------------------------------------------------------------------
# re-verification


def verify_certificate(cert: Certificate, f) -> bool:
    """Re-check a certificate from its evidence alone.  Returns True iff the
    evidence re-derives the recorded outcome for this polynomial."""
    f = as_rat(f)
    if cert.subject != poly_hash(f):
        return False
    try:
        return _VERIFIERS[cert.kind](cert, f)
    except KeyError:
        return False
    except InvalidInputError:
        return False


def _verify_purely_imaginary(cert, f) -> bool:
    count = sturm_count(f)
    if cert.evidence.get("real_root_count") != count:
        return False
    return cert.outcome == (CERTIFIED if count == 0 else REFUTED)


def _verify_irreducible(cert, f) -> bool:
    ev = cert.evidence
    route = ev.get("route")
    n = f.degree
    if cert.outcome == REFUTED:
        if route == "repeated-factor":
            return poly_gcd(f, f.derivative()).degree > 0
        return route == "rational-root" and f.eval_rational(Fraction(ev["root"])) == 0
    if cert.outcome == INCONCLUSIVE:
        return True
    if route == "linear":
        return n == 1
    if route == "eisenstein-dumas":
        return _try_eisenstein_dumas(f, ev["prime"]) is not None
    if route == "modular-pattern":
        pat = factor_degree_pattern(f, ev["prime"])
        return pat.squarefree and pat.degrees == (n,)
    if route == "pattern-intersection":
        if _rational_roots(f):
            return False
        pats = []
        for p, degrees in ev["witnesses"]:
            pat = factor_degree_pattern(f, p)
            if not pat.squarefree:
                return False
            if sorted(pat.degrees) != sorted(degrees):
                return False
            pats.append(pat)
        excluded = _excluded_degrees(n, pats)
        return all(d in excluded for d in range(1, n // 2 + 1))
    return False


def _verify_cycle_type(cert, f) -> bool:
    pat = factor_degree_pattern(f, cert.evidence["prime"])
    return pat.squarefree and list(pat.degrees) == sorted(cert.evidence["degrees"])


def _verify_doubly_transitive(cert, f) -> bool:
    if cert.outcome != CERTIFIED:
        return True
    n = f.degree
    pat = factor_degree_pattern(f, cert.evidence["witness_prime"])
    return pat.squarefree and sorted(pat.degrees) == sorted([1, n - 1])


def _verify_primitive(cert, f) -> bool:
    if cert.outcome != CERTIFIED:
        return True
    ev = cert.evidence
    n = f.degree
    pat = factor_degree_pattern(f, ev["witness_prime"])
    if not pat.squarefree or sorted(pat.degrees) != sorted(ev["degrees"]):
        return False
    if ev["route"] == "doubly-transitive":
        return sorted(pat.degrees) == sorted([1, n - 1])
    if ev["route"] == "large-prime-cycle":
        return _long_prime_cycle(n, pat.degrees) is not None
    return False


def _verify_no_proper_subfield(cert, f) -> bool:
    irr = Certificate.from_json_dict(cert.evidence["irreducible"])
    prim = Certificate.from_json_dict(cert.evidence["primitive"])
    return (
        irr.verified
        and prim.verified
        and irr.subject == cert.subject
        and prim.subject == cert.subject
        and verify_certificate(irr, f)
        and verify_certificate(prim, f)
    )


def _verify_torsion_units(cert, f) -> bool:
    gcds = torsion_sanity_gcds(f)
    recorded = {int(m): d for m, d in cert.evidence["sanity_gcd_degrees"].items()}
    if recorded != gcds:
        return False
    clean = all(d == 0 for d in gcds.values())
    return cert.outcome == (CERTIFIED if clean else REFUTED)


def _verify_special(cert, f) -> bool:
    if cert.outcome != CERTIFIED:
        return True
    ev = cert.evidence
    n = f.degree
    if n < 4 or n % 2 or ev.get("g") != n // 2:
        return False
    required = {"Irreducible", "PurelyImaginary", "NoProperSubfield", "TorsionUnits"}
    comps = ev.get("components", {})
    if set(comps) != required:
        return False
    for name, cdict in comps.items():
        comp = Certificate.from_json_dict(cdict)
        if comp.subject != cert.subject or not comp.verified:
            return False
        if not verify_certificate(comp, f):
            return False
    return True


_VERIFIERS = {
    "PurelyImaginary": _verify_purely_imaginary,
    "Irreducible": _verify_irreducible,
    "CycleTypeWitness": _verify_cycle_type,
    "DoublyTransitive": _verify_doubly_transitive,
    "Primitive": _verify_primitive,
    "NoProperSubfield": _verify_no_proper_subfield,
    "TorsionUnits": _verify_torsion_units,
    "SpecialTorus": _verify_special,
}

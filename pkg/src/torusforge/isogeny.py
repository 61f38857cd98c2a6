"""Distinguishing non-isogenous tori by ramification of the endomorphism
field.

Isogenous simple tori have isomorphic endomorphism fields, so a prime that
divides the field discriminant of one member but provably not another's is
a non-isogeny witness.  Divisibility is decided without ever computing the
field discriminant:

  odd-valuation route: if ell | b, ell does not divide 2glp and
    c = ell (mod ell^2), the trinomial discriminant has exact ell-adic
    valuation 2g-1, which is odd, so the square-part quotient leaves a
    factor ell in the field discriminant (Divisible);
  unit-discriminant route: if ell | c and ell does not divide (2g-1)pb,
    the trinomial discriminant is an ell-adic unit (NotDivisible);
  squarefree-reduction route: a squarefree reduction mod ell certifies the
    prime unramified (NotDivisible); a repeated factor alone decides
    nothing (Indeterminate).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .canon import rat_str
from .certify import certify_special
from .errors import (
    InternalCheckError,
    InvalidInputError,
    NoExtensionError,
    UnsupportedParameterError,
)
from .exactalg import (
    discriminant,
    factor_degree_pattern,
    is_prime,
    primes_from,
    primitive_root_check,
)
from .families import (
    AdmissibleQuadruple,
    adjust_c,
    quadruple_polynomial,
    real_root_threshold_report,
)

DIVISIBLE = "Divisible"
NOT_DIVISIBLE = "NotDivisible"
INDETERMINATE = "Indeterminate"

METHOD_ODD_VALUATION = "odd-valuation"
METHOD_UNIT_DISCRIMINANT = "unit-discriminant"
METHOD_SQUAREFREE_REDUCTION = "squarefree-reduction"


def trinomial_discriminant_closed_form(n: int, a: Fraction, b: Fraction) -> Fraction:
    """Discriminant of x^n + a x + b:
    (-1)^(n(n-1)/2) * (n^n b^(n-1) + (-1)^(n-1) (n-1)^(n-1) a^n)."""
    if n < 2:
        raise InvalidInputError("need degree >= 2")
    a, b = Fraction(a), Fraction(b)
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    inner = Fraction(n) ** n * b ** (n - 1) + (-1) ** (n - 1) * Fraction(n - 1) ** (n - 1) * a**n
    return sign * inner


def trinomial_discriminant(q: AdmissibleQuadruple) -> Fraction:
    """Exact discriminant of the quadruple trinomial, computed by the closed
    form and cross-checked against the resultant route; the two must agree
    exactly (InternalCheckError flags a transcription bug)."""
    q.validate()
    n = 2 * q.g
    closed = trinomial_discriminant_closed_form(
        n, Fraction(-q.b), Fraction(-q.p * q.c, q.l**q.l)
    )
    via_resultant = discriminant(quadruple_polynomial(q))
    if closed != via_resultant:
        raise InternalCheckError(
            f"closed form {closed} != resultant discriminant {via_resultant}"
        )
    return closed


@dataclass(frozen=True)
class DivisibilityResult:
    status: str
    method: Optional[str]


def field_disc_divisibility(q: AdmissibleQuadruple, ell: int) -> DivisibilityResult:
    """Does ell divide the discriminant of the field attached to q?"""
    q.validate()
    if not is_prime(ell):
        raise InvalidInputError(f"{ell} is not prime")
    if ell == q.l:
        raise UnsupportedParameterError(
            "the trinomial is not integral at l; its ramification there is untracked"
        )
    g = q.g
    if q.b % ell == 0 and (2 * g * q.l * q.p) % ell and q.c % (ell * ell) == ell % (ell * ell):
        return DivisibilityResult(status=DIVISIBLE, method=METHOD_ODD_VALUATION)
    if q.c % ell == 0 and ((2 * g - 1) * q.p * q.b) % ell:
        return DivisibilityResult(status=NOT_DIVISIBLE, method=METHOD_UNIT_DISCRIMINANT)
    pat = factor_degree_pattern(quadruple_polynomial(q), ell)
    if pat.squarefree:
        return DivisibilityResult(status=NOT_DIVISIBLE, method=METHOD_SQUAREFREE_REDUCTION)
    return DivisibilityResult(status=INDETERMINATE, method=None)


# ---------------------------------------------------------------------------
# ledgers of mutually non-isogenous families


@dataclass(frozen=True)
class DiscriminantFacts:
    """Both discriminant computations are stored and must agree exactly."""

    quadruple: AdmissibleQuadruple
    disc_closed_form: Fraction
    disc_resultant: Fraction
    divisible: dict  # prime -> method
    nondivisible: dict  # prime -> method

    @property
    def poly_disc(self) -> Fraction:
        return self.disc_closed_form

    def to_json_dict(self) -> dict:
        return {
            "quadruple": list(self.quadruple.as_tuple()),
            "disc_closed_form": rat_str(self.disc_closed_form),
            "disc_resultant": rat_str(self.disc_resultant),
            "divisible": {str(p): m for p, m in sorted(self.divisible.items())},
            "nondivisible": {str(p): m for p, m in sorted(self.nondivisible.items())},
        }


@dataclass(frozen=True)
class LedgerEntry:
    quadruple: AdmissibleQuadruple
    special_hash: str
    facts: DiscriminantFacts
    witness: Optional[int]  # prime separating this entry from all earlier ones

    def to_json_dict(self) -> dict:
        return {
            "quadruple": list(self.quadruple.as_tuple()),
            "special_torus": self.special_hash,
            "facts": self.facts.to_json_dict(),
            "witness": self.witness,
        }


@dataclass
class FamilyLedger:
    g: int
    l: int
    p: int
    entries: list = field(default_factory=list)

    def to_json_dict(self) -> dict:
        return {
            "schema": "torus-forge/1",
            "kind": "FamilyLedger",
            "g": self.g,
            "l": self.l,
            "p": self.p,
            "entries": [e.to_json_dict() for e in self.entries],
        }


@dataclass(frozen=True)
class ExtensionBudget:
    prime_limit: int = 1000
    b_limit: int = 10**6


def _facts_for(q: AdmissibleQuadruple) -> DiscriminantFacts:
    closed = trinomial_discriminant(q)  # raises on closed-vs-resultant mismatch
    return DiscriminantFacts(
        quadruple=q,
        disc_closed_form=closed,
        disc_resultant=discriminant(quadruple_polynomial(q)),
        divisible={},
        nondivisible={},
    )


def seed_ledger(q: AdmissibleQuadruple, special_hash: str) -> FamilyLedger:
    q.validate()
    ledger = FamilyLedger(g=q.g, l=q.l, p=q.p)
    ledger.entries.append(
        LedgerEntry(quadruple=q, special_hash=special_hash, facts=_facts_for(q), witness=None)
    )
    return ledger


def extend_family(
    ledger: FamilyLedger,
    budget: ExtensionBudget = ExtensionBudget(),
    prime_budget: int = 100,
) -> FamilyLedger:
    """Append one more special torus, non-isogenous to every ledger entry.

    Picks the least fresh odd prime ell coprime to 2glp that is certified
    unramified in every existing entry's field; builds b divisible by ell
    (still a primitive root mod p, coprime to l) and c congruent to ell mod
    ell^2, lowered until the trinomial has no real roots; certifies the new
    polynomial and records ell as the separating witness.
    """
    if not ledger.entries:
        raise InvalidInputError("ledger must be nonempty")
    g, l, p = ledger.g, ledger.l, ledger.p
    for e in ledger.entries:
        if (e.quadruple.g, e.quadruple.l, e.quadruple.p) != (g, l, p):
            raise InvalidInputError("ledger entries do not share (g, l, p)")

    used = {e.witness for e in ledger.entries if e.witness is not None}
    ell = None
    blocked = "no fresh prime below the limit"
    for cand in primes_from(3):
        if cand > budget.prime_limit:
            break
        if (2 * g * l * p) % cand == 0 or cand in used:
            continue
        verdicts = [field_disc_divisibility(e.quadruple, cand) for e in ledger.entries]
        if all(v.status == NOT_DIVISIBLE for v in verdicts):
            ell = cand
            ell_verdicts = verdicts
            break
        blocked = f"prime {cand}: " + ", ".join(v.status for v in verdicts)
    if ell is None:
        raise NoExtensionError(blocked)

    b = None
    for k in range(1, budget.b_limit // ell + 1):
        cand = k * ell
        if cand % l == 0 or math.gcd(cand, p) != 1:
            continue
        if primitive_root_check(cand, p):
            b = cand
            break
    if b is None:
        raise NoExtensionError(f"no multiple of {ell} below {budget.b_limit} is a primitive root mod {p}")

    c = adjust_c(ell, g, l, p, b, ell=ell)
    new_q = AdmissibleQuadruple(g=g, l=l, p=p, b=b, c=c).validate()

    own = field_disc_divisibility(new_q, ell)
    if own.status != DIVISIBLE:
        raise NoExtensionError(
            f"constructed quadruple not certifiably ramified at {ell} ({own.status})"
        )

    result = certify_special(
        quadruple_polynomial(new_q),
        prime_budget=prime_budget,
        hint_primes=(l,),
        family_metadata=_family_metadata(new_q),
    )
    if result.outcome != "certified":
        raise NoExtensionError(f"certification failed at stage {result.failed_stage}")

    facts = _facts_for(new_q)
    facts.divisible[ell] = own.method
    new_entries = []
    for e, verdict in zip(ledger.entries, ell_verdicts):
        nondiv = dict(e.facts.nondivisible)
        nondiv[ell] = verdict.method
        new_entries.append(
            LedgerEntry(
                quadruple=e.quadruple,
                special_hash=e.special_hash,
                facts=DiscriminantFacts(
                    quadruple=e.facts.quadruple,
                    disc_closed_form=e.facts.disc_closed_form,
                    disc_resultant=e.facts.disc_resultant,
                    divisible=dict(e.facts.divisible),
                    nondivisible=nondiv,
                ),
                witness=e.witness,
            )
        )
    new_entries.append(
        LedgerEntry(
            quadruple=new_q,
            special_hash=result.bundle.hash,
            facts=facts,
            witness=ell,
        )
    )
    out = FamilyLedger(g=g, l=l, p=p)
    out.entries = new_entries
    return out


def family_metadata_for_quadruple(q: AdmissibleQuadruple) -> dict:
    """Certificate metadata for a quadruple polynomial, including both
    closed-form real-root thresholds next to the exact Sturm answer."""
    from mpmath import mp

    report = real_root_threshold_report(q.g, q.l, q.p, q.b)
    with mp.workprec(160):
        return {
            "kind": "quadruple",
            "parameters": list(q.as_tuple()),
            "real_root_thresholds": {
                "corrected_factor": mp.nstr(report.corrected_factor_threshold, 30),
                "published_factor": mp.nstr(report.published_factor_threshold, 30),
                "sturm_max_c": report.sturm_max_c,
            },
        }


_family_metadata = family_metadata_for_quadruple


def non_isogeny_witness(e1: LedgerEntry, e2: LedgerEntry) -> Optional[int]:
    """Least recorded prime dividing exactly one of the two field
    discriminants; None when the recorded facts cannot separate them."""
    separating = []
    for p in set(e1.facts.divisible) & set(e2.facts.nondivisible):
        separating.append(p)
    for p in set(e2.facts.divisible) & set(e1.facts.nondivisible):
        separating.append(p)
    return min(separating) if separating else None

"""Growing arbitrarily many pairwise non-isogenous tori of one dimension.

Isogenous simple tori share their endomorphism field, so a prime that
ramifies in one member's field but provably not in the others' separates
them.  Each extension step picks a fresh prime ell, arranges ell | b and
c = ell mod ell^2 (which gives the trinomial discriminant odd ell-adic
valuation: ramified), and checks the earlier members are unramified at
ell by exact unit-discriminant or squarefree-reduction arguments.
"""

from torusforge.certify import certify_special
from torusforge.families import AdmissibleQuadruple, quadruple_polynomial
from torusforge.isogeny import (
    extend_family,
    field_disc_divisibility,
    non_isogeny_witness,
    seed_ledger,
    trinomial_discriminant,
)

seed = AdmissibleQuadruple(2, 3, 7, 5, -16)
print(f"seed quadruple: {seed.as_tuple()}")
print(f"  trinomial discriminant: {trinomial_discriminant(seed)}")

bundle = certify_special(quadruple_polynomial(seed), hint_primes=(3,)).bundle
ledger = seed_ledger(seed, bundle.hash)

for step in range(3):
    ledger = extend_family(ledger)
    new = ledger.entries[-1]
    print(f"\nstep {step + 1}: appended {new.quadruple.as_tuple()} with witness prime {new.witness}")
    print(f"  b = {new.quadruple.b} is divisible by {new.witness};"
          f" c = {new.quadruple.c} is {new.witness} mod {new.witness ** 2}")
    own = field_disc_divisibility(new.quadruple, new.witness)
    print(f"  ramification at {new.witness}: {own.status} via {own.method}")

print("\npairwise separation:")
n = len(ledger.entries)
for i in range(n):
    for j in range(i + 1, n):
        w = non_isogeny_witness(ledger.entries[i], ledger.entries[j])
        qi, qj = ledger.entries[i].quadruple, ledger.entries[j].quadruple
        print(f"  {qi.as_tuple()} vs {qj.as_tuple()}: prime {w}")
print("\neach pair of fields differs at a ramified prime, so no two of the")
print("corresponding tori are isogenous; the construction never terminates")

"""From the trinomial x^4 + x + 1 to a 2-dimensional complex torus whose
only endomorphisms come from a degree-4 purely imaginary field.

The walk: certify the field-theoretic hypotheses, build the period
lattice from high-precision roots, then measure the integer solution
lattices of the three linear conditions in the complex structure J.
"""

from torusforge.certify import certify_special
from torusforge.exactalg import RatPolynomial
from torusforge.periods import build_period_lattice
from torusforge.toruslab import (
    automorphism_report,
    endomorphism_lattice,
    hom_dual_rank,
    neron_severi_rank,
)

f = RatPolynomial([1, 1, 0, 0, 1])
print("polynomial: x^4 + x + 1")

# -- certificates ------------------------------------------------------------

result = certify_special(f)
print(f"\ncertification outcome: {result.outcome}")
for kind, cert in result.components.items():
    route = cert.evidence.get("route", "")
    print(f"  {kind:18s} {cert.outcome:11s} {route}")

# -- the period lattice -------------------------------------------------------

lattice = build_period_lattice(f, precision=256)
r1, r2 = lattice.invariant_residuals()
print(f"\nperiod lattice at 256 bits: g = {lattice.g}")
print(f"  upper-half roots: {[complex(r.value) for r in lattice.roots_upper]}")
print(f"  residual of J^2 + I:   {float(r1):.3e}")
print(f"  residual of JC - CJ:   {float(r2):.3e}")

# -- the three ranks ----------------------------------------------------------

endo = endomorphism_lattice(lattice)
ns = neron_severi_rank(lattice)
hd = hom_dual_rank(lattice)
print(f"\nendomorphism lattice rank: {endo.rank} (expected 2g = 4)")
print("  generators, expanded exactly in powers of the companion matrix:")
for w in endo.witnesses:
    print(f"    {w.q_coefficients}")
print(f"Neron-Severi rank: {ns.rank} (rank-0 certified: {ns.rank_zero_certified})")
print(f"Hom(T, T-dual) rank: {hd.rank} (rank-0 certified: {hd.rank_zero_certified})")

autos = automorphism_report(lattice, endo, torsion_verified=True)
print(f"\nautomorphisms: torsion Z/{autos.torsion_order} x Z^{autos.free_rank}")
print("a Picard-number-zero surface-free torus, pinned down by integer lattices")

"""The two-parameter trinomial family x^2g - b x - pc/l^l.

Admissibility asks l | 2g-1, p = 1 mod 2g-1, b a primitive root mod p
with l not dividing b, and l not dividing c.  The constant term then
carries an l-adic pole of order l, which makes the Newton polygon a
single segment (local irreducibility), while reduction mod p exhibits a
(2g-1)-cycle in the Galois group (double transitivity).
"""

from itertools import islice

from mpmath import mp

from torusforge.certify import certify_special
from torusforge.exactalg import sturm_count
from torusforge.families import (
    SearchBudget,
    enumerate_quadruples,
    max_c_without_real_roots,
    quadruple_polynomial,
    real_root_threshold_report,
)

# -- how negative must c be? --------------------------------------------------

print("== the real-root threshold in c, for (g,l,p,b) = (2,3,7,5) ==")
report = real_root_threshold_report(2, 3, 7, 5)
print(f"  threshold, corrected minimum formula: {mp.nstr(report.corrected_factor_threshold, 8)}")
print(f"  threshold, published closed form:     {mp.nstr(report.published_factor_threshold, 8)}")
print(f"  exact Sturm answer (largest good c):  {report.sturm_max_c}")
print("  the Sturm count is ground truth; the corrected formula floors to it,")
print("  the published variant does not even have the right sign")

c = max_c_without_real_roots(2, 3, 7, 5)
f = quadruple_polynomial(next(iter(enumerate_quadruples(2, SearchBudget(p_max=10)))))
print(f"\n  at c = {c}: polynomial {tuple(map(str, f.coeffs))}, real roots: {sturm_count(f)}")

# -- enumeration --------------------------------------------------------------

print("\n== first admissible quadruples (g = 2) ==")
for q in islice(enumerate_quadruples(2, SearchBudget(p_max=20)), 6):
    print(f"  (g,l,p,b,c) = {q.as_tuple()}")

print("\n== first admissible quadruples (g = 3: l = 5, p = 1 mod 5) ==")
for q in islice(enumerate_quadruples(3, SearchBudget(p_max=20)), 3):
    print(f"  (g,l,p,b,c) = {q.as_tuple()}")

# -- certification ------------------------------------------------------------

print("\n== certifying the head of the g = 2 family ==")
res = certify_special(f, hint_primes=(3,))
irr = res.components["Irreducible"]
prim = res.components["Primitive"]
print(f"  outcome: {res.outcome}")
print(f"  irreducibility: {irr.evidence['route']} at prime {irr.evidence['prime']}")
print(f"  primitivity: {prim.evidence['route']} at witness prime {prim.evidence['witness_prime']},")
print(f"    cycle type {prim.evidence['degrees']}")

"""Tour of the exact-arithmetic toolkit.

Everything here is computed without floating point: Sturm sequences count
real roots exactly, resultants and discriminants come out as exact
rationals, Newton polygons read p-adic valuations off the coefficients,
and factor-degree patterns over F_p are found by distinct-degree
factorization.
"""

from fractions import Fraction

from torusforge.exactalg import (
    IntPolynomial,
    RatPolynomial,
    discriminant,
    factor_degree_pattern,
    integer_near_kernel,
    lll_reduce,
    newton_polygon,
    padic_valuation,
    sturm_count,
)

# -- Sturm counts -----------------------------------------------------------

print("== exact real-root counts ==")
for coeffs, label in [
    ([1, 0, 1], "x^2 + 1"),
    ([0, -1, 0, 1], "x^3 - x"),
    ([24, 24, 12, 4, 1], "x^4 + 4x^3 + 12x^2 + 24x + 24"),
]:
    f = RatPolynomial(coeffs)
    print(f"  {label:35s} -> {sturm_count(f)} real roots")

# the last one is the degree-4 truncated exponential rescaled by 4!: even
# truncations of the exponential series never touch the real axis

# -- discriminants ----------------------------------------------------------

print("\n== discriminants ==")
selmer4 = RatPolynomial([1, 1, 0, 0, 1])
print(f"  disc(x^4+x+1) = {discriminant(selmer4)}")

trinomial = RatPolynomial([Fraction(112, 27), -5, 0, 0, 1])
d = discriminant(trinomial)
print(f"  disc(x^4-5x+112/27) = {d}")
print(f"    3-adic valuation {padic_valuation(d, 3)} (the 27 in the constant term, cubed)")

# -- Newton polygons --------------------------------------------------------

print("\n== Newton polygon of x^4 - 5x + 112/27 at p = 3 ==")
poly = newton_polygon(trinomial, 3)
seg = poly.segments[0]
print(f"  single segment {seg.start} -> {seg.end}, slope {seg.slope},")
print(f"  interior lattice points: {seg.interior_lattice_points}")
print("  endpoints are the only lattice points: irreducible over Q_3, hence over Q")

# -- factor patterns over F_p ------------------------------------------------

print("\n== factor-degree patterns of x^4+x+1 ==")
for p in (2, 3, 5, 7, 11, 13):
    pat = factor_degree_pattern(IntPolynomial([1, 1, 0, 0, 1]), p)
    tag = pat.degrees if pat.squarefree else "not squarefree"
    print(f"  mod {p:2d}: {tag}")
print("  each squarefree pattern is the cycle type of a Galois element")

# -- lattice reduction and integer relations --------------------------------

print("\n== LLL and integer near-kernels ==")
reduced = lll_reduce([(1, 0), (10, 1)])
print(f"  LLL of (1,0),(10,1): {reduced.basis} (transform {reduced.transform})")

# recover the relation x - y = 0 from a floating constraint row
gens = integer_near_kernel([[1.0, -1.0]], scale=1 << 64, residual_tol=1e-12, entry_precision=256)
print(f"  integer near-kernel of (1, -1): {gens}")

from mpmath import mp

with mp.workprec(300):
    row = [mp.mpf(1), -mp.sqrt(2)]
gens = integer_near_kernel(
    [row], scale=1 << 128, residual_tol=mp.mpf(2) ** -64, entry_precision=300, norm_bound=1 << 32
)
print(f"  integer near-kernel of (1, -sqrt 2): {gens}  (no small relation exists)")

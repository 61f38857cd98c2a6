"""Exact arithmetic substrate: polynomials over Z/Q, Sturm sequences,
resultants, Newton polygons, modular factor patterns, HNF/LLL lattice
algorithms and integer near-kernel extraction."""

from .polynomials import (
    NEG_INF,
    POS_INF,
    IntPolynomial,
    NewtonPolygon,
    PolygonSegment,
    RatPolynomial,
    as_rat,
    cauchy_root_bound,
    discriminant,
    newton_polygon,
    padic_valuation,
    poly_gcd,
    resultant,
    squarefree_part,
    sturm_chain,
    sturm_count,
)
from .finite_fields import (
    FactorPattern,
    crt,
    divisors,
    euler_phi,
    factor_degree_pattern,
    factorize,
    is_prime,
    least_primitive_root,
    next_prime,
    primes_from,
    primitive_root_check,
)
from .lattices import (
    NearKernelReport,
    ReducedLattice,
    det_bareiss,
    hnf,
    hnf_contains,
    integer_kernel,
    integer_near_kernel,
    integer_near_kernel_report,
    lattice_contains,
    lll_reduce,
    verify_lovasz,
)

__all__ = [
    "NEG_INF",
    "POS_INF",
    "IntPolynomial",
    "RatPolynomial",
    "NewtonPolygon",
    "PolygonSegment",
    "FactorPattern",
    "ReducedLattice",
    "NearKernelReport",
    "as_rat",
    "cauchy_root_bound",
    "crt",
    "det_bareiss",
    "discriminant",
    "divisors",
    "euler_phi",
    "factor_degree_pattern",
    "factorize",
    "hnf",
    "hnf_contains",
    "integer_kernel",
    "integer_near_kernel",
    "integer_near_kernel_report",
    "is_prime",
    "lattice_contains",
    "least_primitive_root",
    "lll_reduce",
    "newton_polygon",
    "next_prime",
    "padic_valuation",
    "poly_gcd",
    "primes_from",
    "primitive_root_check",
    "resultant",
    "squarefree_part",
    "sturm_chain",
    "sturm_count",
    "verify_lovasz",
]

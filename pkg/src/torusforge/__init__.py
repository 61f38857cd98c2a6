"""torus-forge: explicit families of simple complex tori of algebraic
dimension zero.

The package builds even-degree polynomials without real roots whose Galois
groups are provably primitive, turns each into a period lattice with an
exact companion matrix and a high-precision complex structure, and then
verifies numerically that the torus has a degree-2g field of endomorphisms,
trivial Neron-Severi group, no homomorphisms to its dual, and automorphism
group {+-1} x Z^(g-1) -- with machine-checkable certificates for every
field-theoretic hypothesis and ramification witnesses separating the
members of each family up to isogeny.
"""

from . import exactalg
from .canon import poly_from_json, poly_hash, poly_to_json
from .certify import (
    CERTIFIED,
    INCONCLUSIVE,
    REFUTED,
    Certificate,
    SpecialResult,
    certify_irreducible,
    certify_no_proper_subfield,
    certify_primitive,
    certify_purely_imaginary,
    certify_special,
    certify_torsion_units,
    frobenius_scan,
    torsion_sanity_gcds,
    verify_certificate,
)
from .exactalg import IntPolynomial, RatPolynomial
from .families import (
    AdmissibleQuadruple,
    FamilySpec,
    SearchBudget,
    adjust_c,
    enumerate_quadruples,
    max_c_without_real_roots,
    quadruple_polynomial,
    real_root_threshold_report,
    selmer,
    truncated_exponential,
    truncated_exponential_scaled,
)
from .isogeny import (
    DiscriminantFacts,
    FamilyLedger,
    extend_family,
    field_disc_divisibility,
    non_isogeny_witness,
    seed_ledger,
    trinomial_discriminant,
)
from .periods import (
    CertifiedRoot,
    PeriodLattice,
    build_period_lattice,
    companion_matrix,
    complex_roots,
)
from .pipeline import CertificateStore, RunConfig
from .toruslab import (
    AutomorphismReport,
    EndomorphismWitness,
    RankReport,
    automorphism_report,
    endomorphism_lattice,
    exact_rank,
    hom_dual_rank,
    neron_severi_rank,
    square_torus_complex_structure,
    verify_in_QC,
)

__version__ = "0.1.0"

__all__ = [
    "exactalg",
    "AdmissibleQuadruple",
    "AutomorphismReport",
    "CERTIFIED",
    "Certificate",
    "CertificateStore",
    "CertifiedRoot",
    "DiscriminantFacts",
    "EndomorphismWitness",
    "FamilyLedger",
    "FamilySpec",
    "INCONCLUSIVE",
    "IntPolynomial",
    "PeriodLattice",
    "RatPolynomial",
    "RankReport",
    "REFUTED",
    "RunConfig",
    "SearchBudget",
    "SpecialResult",
    "adjust_c",
    "automorphism_report",
    "build_period_lattice",
    "certify_irreducible",
    "certify_no_proper_subfield",
    "certify_primitive",
    "certify_purely_imaginary",
    "certify_special",
    "certify_torsion_units",
    "companion_matrix",
    "complex_roots",
    "endomorphism_lattice",
    "enumerate_quadruples",
    "exact_rank",
    "extend_family",
    "field_disc_divisibility",
    "frobenius_scan",
    "hom_dual_rank",
    "max_c_without_real_roots",
    "neron_severi_rank",
    "non_isogeny_witness",
    "poly_from_json",
    "poly_hash",
    "poly_to_json",
    "quadruple_polynomial",
    "real_root_threshold_report",
    "seed_ledger",
    "selmer",
    "square_torus_complex_structure",
    "torsion_sanity_gcds",
    "trinomial_discriminant",
    "truncated_exponential",
    "truncated_exponential_scaled",
    "verify_certificate",
    "verify_in_QC",
]

from fractions import Fraction

import pytest
from mpmath import mp

from torusforge.errors import DependencyError
from torusforge.exactalg import RatPolynomial, next_prime
from torusforge.periods import build_period_lattice, companion_matrix
from torusforge.toruslab import (
    KIND_ENDOMORPHISM,
    KIND_HOM_DUAL,
    KIND_NERON_SEVERI,
    automorphism_report,
    endomorphism_lattice,
    exact_rank,
    hom_dual_rank,
    neron_severi_rank,
    ns_contained_in_homdual,
    rank_from_structures,
    rational_structure_ranks,
    square_torus_complex_structure,
    verify_in_QC,
)


def P(*coeffs):
    return RatPolynomial(coeffs)


SELMER4 = P(1, 1, 0, 0, 1)


@pytest.fixture(scope="module")
def selmer_lattice():
    return build_period_lattice(SELMER4, 256)


@pytest.fixture(scope="module")
def selmer_reports(selmer_lattice):
    return (
        endomorphism_lattice(selmer_lattice),
        neron_severi_rank(selmer_lattice),
        hom_dual_rank(selmer_lattice),
    )


class TestSquareTorusOracle:
    def test_exact_ranks(self):
        j0 = square_torus_complex_structure(2)
        assert exact_rank(KIND_ENDOMORPHISM, j0)[0] == 8
        assert exact_rank(KIND_NERON_SEVERI, j0)[0] == 4
        assert exact_rank(KIND_HOM_DUAL, j0)[0] == 8

    def test_lll_path_matches_exact_path(self):
        j0 = square_torus_complex_structure(2)
        reports = rational_structure_ranks(j0, 256)
        for kind, report in reports.items():
            rank, gens = exact_rank(kind, j0)
            assert report.rank == rank
            assert report.agreement
            # same lattice, not merely the same rank
            from torusforge.exactalg import hnf

            exact_coords = hnf([_flatten_for(kind, m) for m in gens])
            assert [list(v) for v in report.coordinate_hnf] == exact_coords


def _flatten_for(kind, m):
    n = len(m)
    if kind == KIND_NERON_SEVERI:
        return [m[i][j] for i in range(n) for j in range(i + 1, n)]
    return [m[i][j] for i in range(n) for j in range(n)]


class TestSelmerRanks:
    def test_expected_ranks(self, selmer_reports):
        endo, ns, hd = selmer_reports
        assert (endo.rank, ns.rank, hd.rank) == (4, 0, 0)
        assert endo.agreement and ns.agreement and hd.agreement

    def test_identity_always_present(self, selmer_reports):
        endo = selmer_reports[0]
        mats = [list(map(list, m)) for m in endo.generators]
        ident = [[1 if i == j else 0 for j in range(4)] for i in range(4)]
        from torusforge.exactalg import hnf, hnf_contains

        flat = [sum(m, []) for m in mats]
        assert hnf_contains(hnf(flat), sum(ident, []))

    def test_all_generators_have_qc_witnesses(self, selmer_reports):
        endo = selmer_reports[0]
        assert all(w.q_coefficients is not None for w in endo.witnesses)

    def test_generators_span_a_ring(self, selmer_reports):
        # products of generators stay in the rational span of generators
        endo = selmer_reports[0]
        gens = [[[Fraction(x) for x in row] for row in m] for m in endo.generators]
        span_cols = [[m[i][j] for m in gens] for i in range(4) for j in range(4)]
        from torusforge.toruslab import _solve_exact

        for a in gens:
            for b in gens:
                prod = [
                    [sum(a[i][t] * b[t][j] for t in range(4)) for j in range(4)]
                    for i in range(4)
                ]
                target = [prod[i][j] for i in range(4) for j in range(4)]
                cols = [[Fraction(span_cols[r][k]) for r in range(16)] for k in range(len(gens))]
                assert _solve_exact(cols, [Fraction(t) for t in target]) is not None

    def test_residuals_below_coarse_tolerance(self, selmer_reports):
        for report in selmer_reports:
            for res in report.residuals:
                assert res < report.residual_tol

    def test_rank_zero_certified_with_bound(self, selmer_reports):
        _, ns, hd = selmer_reports
        assert ns.rank_zero_certified and hd.rank_zero_certified
        for report in (ns, hd):
            for prec, shortest in zip(report.precisions, report.shortest_rejected):
                assert shortest > mp.mpf(2) ** (prec // 8)

    def test_ns_contained_in_homdual(self, selmer_reports):
        _, ns, hd = selmer_reports
        assert ns_contained_in_homdual(ns, hd)

    def test_automorphism_descriptor(self, selmer_lattice, selmer_reports):
        rep = automorphism_report(selmer_lattice, selmer_reports[0], True)
        assert rep.torsion_order == 2 and rep.free_rank == 1

    def test_automorphism_dependency_errors(self, selmer_lattice, selmer_reports):
        with pytest.raises(DependencyError):
            automorphism_report(selmer_lattice, selmer_reports[0], False)
        with pytest.raises(DependencyError):
            automorphism_report(selmer_lattice, selmer_reports[1], True)


class TestVerifyInQC:
    def test_identity(self):
        c = companion_matrix(SELMER4)
        w = verify_in_QC([[1 if i == j else 0 for j in range(4)] for i in range(4)], c)
        assert w.q_coefficients == (1, 0, 0, 0)

    def test_c_cubed(self):
        c = [[Fraction(x) for x in row] for row in companion_matrix(SELMER4)]
        c2 = [[sum(c[i][t] * c[t][j] for t in range(4)) for j in range(4)] for i in range(4)]
        c3 = [[sum(c2[i][t] * c[t][j] for t in range(4)) for j in range(4)] for i in range(4)]
        w = verify_in_QC([[int(x) for x in row] for row in c3], companion_matrix(SELMER4))
        assert w.q_coefficients == (0, 0, 0, 1)

    def test_non_commuting_matrix_absent(self):
        m = [[0, 1, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]]
        w = verify_in_QC(m, companion_matrix(SELMER4))
        assert w.q_coefficients is None


class TestStructuralProperties:
    def test_scale_invariance(self, selmer_lattice):
        # J is conjugation-defined: scaling the basis matrix by a positive
        # rational leaves it unchanged, hence all ranks unchanged
        lam = Fraction(7, 3)
        with mp.workprec(320):
            from torusforge.periods import block_diag_i, mat_inverse, mat_mul

            s = [[x * lam for x in row] for row in selmer_lattice.S]
            j_scaled = mat_mul(mat_inverse(s), mat_mul(block_diag_i(2), s))
            diff = max(
                abs(a - b)
                for ra, rb in zip(j_scaled, selmer_lattice.J)
                for a, b in zip(ra, rb)
            )
            assert diff < mp.mpf(2) ** -250

    def test_generic_complex_structure_rank_one(self):
        # conjugating the block structure by a deterministic irrational
        # matrix (square roots of primes) leaves only integer multiples of
        # the identity commuting: a very general torus has endomorphisms Z
        def j_at(prec):
            with mp.workprec(prec + 64):
                n = 4
                primes, vals = [], []
                q = 1
                mat = []
                for i in range(n):
                    row = []
                    for j in range(n):
                        q = next_prime(q)
                        row.append(mp.sqrt(q) + (4 if i == j else 0))
                    mat.append(row)
                from torusforge.periods import block_diag_i, mat_inverse, mat_mul

                return mat_mul(mat_inverse(mat), mat_mul(block_diag_i(2), mat))

        report = rank_from_structures(KIND_ENDOMORPHISM, j_at, 256)
        assert report.rank == 1
        assert report.agreement

    def test_g1_neron_severi_rank_one(self):
        # on a one-dimensional torus every alternating integer form is a
        # multiple of the standard symplectic form, which is invariant
        lat = build_period_lattice(P(1, 0, 1), 128)
        ns = neron_severi_rank(lat)
        assert ns.rank == 1
        assert ns.generators[0] in (((0, 1), (-1, 0)), ((0, -1), (1, 0)))

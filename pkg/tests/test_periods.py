from fractions import Fraction

import numpy as np
import pytest
from mpmath import mp

from torusforge.errors import DependencyError, InvalidInputError
from torusforge.exactalg import RatPolynomial
from torusforge.periods import (
    build_period_lattice,
    char_poly_exact,
    companion_matrix,
    complex_roots,
    mat_sub,
    max_abs_entry,
)


def P(*coeffs):
    return RatPolynomial(coeffs)


SELMER4 = P(1, 1, 0, 0, 1)
QUAD = P(Fraction(112, 27), -5, 0, 0, 1)
EXP6 = P(720, 720, 360, 120, 30, 6, 1)


class TestComplexRoots:
    def test_gaussian_units(self):
        roots = complex_roots(P(1, 0, 1), 128)
        vals = sorted([r.value for r in roots], key=lambda z: mp.im(z))
        assert abs(vals[0] + 1j) < 1e-30 and abs(vals[1] - 1j) < 1e-30
        assert all(r.error_radius < mp.mpf(2) ** -60 for r in roots)

    def test_selmer_conjugate_pairs(self):
        roots = complex_roots(SELMER4, 256)
        # min |Im| is ~0.4300 (eigenvalue oracle below); in particular no
        # root is anywhere near the real axis
        assert all(abs(mp.im(r.value)) > 0.4 for r in roots)
        with mp.workprec(600):
            for i, r in enumerate(roots):
                partner = roots[r.conjugate_partner]
                assert abs(mp.conj(r.value) - partner.value) < mp.mpf(2) ** -200
        # double-precision companion eigenvalue oracle
        eigs = np.linalg.eigvals(np.array([[0, 0, 0, -1], [1, 0, 0, -1], [0, 1, 0, 0], [0, 0, 1, 0]], dtype=float))
        for e in eigs:
            assert min(abs(complex(r.value) - e) for r in roots) < 1e-12

    def test_all_real(self):
        roots = complex_roots(P(0, -1, 0, 1), 128)
        assert [r.conjugate_partner for r in roots] == [0, 1, 2]
        assert sorted(round(float(mp.re(r.value))) for r in roots) == [-1, 0, 1]

    def test_not_squarefree_rejected(self):
        with pytest.raises(InvalidInputError):
            complex_roots(P(1, 2, 1), 128)  # (x+1)^2


class TestCompanion:
    def test_gaussian(self):
        assert companion_matrix(P(1, 0, 1)) == ((0, -1), (1, 0))

    def test_selmer_last_column(self):
        c = companion_matrix(SELMER4)
        assert [row[-1] for row in c] == [-1, -1, 0, 0]

    def test_rational_last_column(self):
        c = companion_matrix(QUAD)
        assert [row[-1] for row in c] == [Fraction(-112, 27), 5, 0, 0]

    def test_char_poly_is_f(self):
        for f in (SELMER4, QUAD, EXP6):
            assert char_poly_exact(companion_matrix(f)).coeffs == f.monic().coeffs


class TestPeriodLattice:
    def test_g1_exact_complex_structure(self):
        lat = build_period_lattice(P(1, 0, 1), 128)
        assert lat.g == 1
        j = [[float(x) for x in row] for row in lat.J]
        assert abs(j[0][0]) < 1e-35 and abs(j[0][1] + 1) < 1e-35
        assert abs(j[1][0] - 1) < 1e-35 and abs(j[1][1]) < 1e-35

    @pytest.mark.parametrize("f,g", [(SELMER4, 2), (QUAD, 2), (EXP6, 3)])
    def test_invariants(self, f, g):
        lat = build_period_lattice(f, 256)
        assert lat.g == g
        r1, r2 = lat.invariant_residuals()
        tol = mp.mpf(2) ** -128
        assert r1 < tol and r2 < tol
        assert len(lat.roots_upper) == g
        assert all(mp.im(r.value) > 0 for r in lat.roots_upper)

    def test_doubling_reproduces_J(self):
        lat = build_period_lattice(SELMER4, 256)
        lat2 = build_period_lattice(SELMER4, 512)
        with mp.workprec(600):
            diff = max_abs_entry(mat_sub([list(r) for r in lat.J], [list(r) for r in lat2.J]))
            assert diff < mp.mpf(2) ** -128

    def test_alternative_embedding_commutes(self):
        lat = build_period_lattice(SELMER4, 256, embedding_bitmask=1)
        base = build_period_lattice(SELMER4, 256)
        r1, r2 = lat.invariant_residuals()
        assert r1 < mp.mpf(2) ** -128 and r2 < mp.mpf(2) ** -128
        with mp.workprec(320):
            diff = max_abs_entry(mat_sub([list(r) for r in lat.J], [list(r) for r in base.J]))
            assert diff > mp.mpf(1) / 10  # genuinely different structure

    def test_real_roots_rejected(self):
        with pytest.raises(DependencyError):
            build_period_lattice(P(-1, 0, 0, 0, 1), 128)  # x^4 - 1

    def test_odd_degree_rejected(self):
        with pytest.raises(InvalidInputError):
            build_period_lattice(P(1, 1, 0, 1), 128)

    def test_seed_invariance(self):
        a = build_period_lattice(SELMER4, 256, seed=1)
        b = build_period_lattice(SELMER4, 256, seed=2)
        assert a.J == b.J

    def test_condition_number_recorded(self):
        lat = build_period_lattice(SELMER4, 256)
        assert lat.condition_number > 1

    def test_json_roundtrip_shape(self):
        lat = build_period_lattice(SELMER4, 256)
        d = lat.to_json_dict()
        assert d["schema"] == "torus-forge/1"
        assert d["g"] == 2 and len(d["S"]) == 4 and len(d["J"]) == 4
        assert d["polynomial"] == ["1", "1", "0", "0", "1"]
        from torusforge.canon import hex_to_mpf

        with mp.workprec(300):
            back = hex_to_mpf(d["J"][0][0])
            assert back == lat.J[0][0]

from fractions import Fraction
from itertools import islice

import pytest
from mpmath import mp

from torusforge.errors import InvalidQuadrupleError, UnsupportedParameterError
from torusforge.exactalg import sturm_count
from torusforge.families import (
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


class TestTruncatedExponential:
    def test_small_cases(self):
        assert truncated_exponential(1).coeffs == (1, 1)
        assert truncated_exponential(2).coeffs == (1, 1, Fraction(1, 2))
        assert truncated_exponential(4).coeffs == (
            1, 1, Fraction(1, 2), Fraction(1, 6), Fraction(1, 24),
        )

    def test_integer_rescaling(self):
        assert truncated_exponential_scaled(4).coeffs == (24, 24, 12, 4, 1)
        assert truncated_exponential_scaled(6).coeffs == (720, 720, 360, 120, 30, 6, 1)

    def test_invalid_n(self):
        with pytest.raises(Exception):
            truncated_exponential(0)

    def test_even_truncations_have_no_real_roots(self):
        for k in range(1, 7):
            assert sturm_count(truncated_exponential(2 * k)) == 0

    def test_odd_truncations_have_a_real_root(self):
        assert sturm_count(truncated_exponential(3)) == 1


class TestSelmer:
    def test_examples(self):
        assert selmer(2).coeffs == (1, 1, 0, 0, 1)
        assert selmer(3).coeffs == (1, 1, 0, 0, 0, 0, 1)

    def test_g_1_mod_3_rejected(self):
        with pytest.raises(UnsupportedParameterError):
            selmer(4)
        with pytest.raises(UnsupportedParameterError):
            selmer(7)

    def test_positivity_on_grid(self):
        for g in (2, 3, 5):
            f = selmer(g).to_rat()
            for k in range(-40, 41):
                a = Fraction(k, 10)
                v = f.eval_rational(a)
                assert v > 0
                if abs(a) >= 1:
                    assert v >= 1


class TestQuadruplePolynomial:
    def test_example(self):
        q = AdmissibleQuadruple(2, 3, 7, 5, -16)
        assert quadruple_polynomial(q).coeffs == (Fraction(112, 27), -5, 0, 0, 1)

    def test_l_divides_b_rejected(self):
        with pytest.raises(InvalidQuadrupleError) as exc:
            quadruple_polynomial(AdmissibleQuadruple(2, 3, 7, 6, -16))
        assert "b" in exc.value.predicate

    def test_l_divides_c_rejected(self):
        with pytest.raises(InvalidQuadrupleError) as exc:
            quadruple_polynomial(AdmissibleQuadruple(2, 3, 7, 5, -15))
        assert "c" in exc.value.predicate

    def test_non_primitive_root_rejected(self):
        with pytest.raises(InvalidQuadrupleError):
            quadruple_polynomial(AdmissibleQuadruple(2, 3, 7, 2, -16))

    def test_p_congruence_rejected(self):
        with pytest.raises(InvalidQuadrupleError):
            quadruple_polynomial(AdmissibleQuadruple(2, 3, 5, 2, -16))


class TestRealRootThreshold:
    def test_max_c_reference_case(self):
        assert max_c_without_real_roots(2, 3, 7, 5) == -16

    def test_boundary_sturm_counts(self):
        q16 = AdmissibleQuadruple(2, 3, 7, 5, -16)
        assert sturm_count(quadruple_polynomial(q16)) == 0
        # one above the maximum must have real roots (c=-15 is rejected
        # by the l|c predicate, so build the raw trinomial directly)
        from torusforge.families import _trinomial

        assert sturm_count(_trinomial(2, 3, 7, 5, -15)) > 0

    def test_corrected_form_agrees_published_disagrees(self):
        # exercised over several (g, l, p, b) heads
        for (g, l, p, b) in [(2, 3, 7, 5), (2, 3, 13, 2), (3, 5, 11, 2), (3, 5, 11, 6)]:
            rep = real_root_threshold_report(g, l, p, b)
            with mp.workprec(160):
                assert int(mp.floor(rep.corrected_factor_threshold)) == rep.sturm_max_c
                assert int(mp.floor(rep.published_factor_threshold)) != rep.sturm_max_c

    def test_adjust_c_minimal_and_residue_preserving(self):
        c1 = adjust_c(1, 2, 3, 7, 5)
        assert c1 % 3 == 1 % 3
        assert (1 - c1) % 21 == 0
        assert sturm_count(quadruple_polynomial(AdmissibleQuadruple(2, 3, 7, 5, c1))) == 0
        # minimality: one step back up has real roots
        from torusforge.families import _trinomial

        assert sturm_count(_trinomial(2, 3, 7, 5, c1 + 21)) > 0

    def test_adjust_c_with_ell(self):
        c2 = adjust_c(5, 2, 3, 7, 5, ell=5)
        assert c2 % 525 == 5 % 525
        assert c2 % 25 == 5
        assert sturm_count(quadruple_polynomial(AdmissibleQuadruple(2, 3, 7, 5, c2))) == 0

    def test_adjust_c_noop_when_already_free(self):
        assert adjust_c(-16, 2, 3, 7, 5) == -16


class TestEnumeration:
    def test_head_g2(self):
        head = list(islice(enumerate_quadruples(2, SearchBudget(p_max=40)), 3))
        assert head[0].as_tuple() == (2, 3, 7, 5, -16)
        assert [q.c for q in head] == [-16, -17, -19]  # skipping -18 (3 | 18)

    def test_all_emitted_are_valid_and_real_root_free(self):
        for q in islice(enumerate_quadruples(2, SearchBudget(p_max=40)), 12):
            f = quadruple_polynomial(q)  # validates
            assert sturm_count(f) == 0

    def test_empty_budget(self):
        assert list(enumerate_quadruples(2, SearchBudget(p_max=6))) == []

    def test_g3_uses_l5_p11(self):
        head = next(iter(enumerate_quadruples(3, SearchBudget(p_max=40))))
        assert (head.l, head.p) == (5, 11)

    def test_spec_roundtrip(self):
        q = AdmissibleQuadruple(2, 3, 7, 5, -16)
        spec = FamilySpec(kind="quadruple", g=2, quadruple=q)
        again = FamilySpec.from_json_dict(spec.to_json_dict())
        assert again == spec
        assert again.polynomial().coeffs == quadruple_polynomial(q).coeffs

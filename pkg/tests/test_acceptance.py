"""End-to-end acceptance suite.

One test per criterion; each prints a single PASS line with its runtime
when it succeeds (run with -s or look at the captured output).  Tolerances
and runtime budgets are fixed here, not tuned at run time.
"""

import random
import time
from fractions import Fraction

import pytest
from mpmath import mp

from torusforge.canon import poly_hash
from torusforge.certify import certify_irreducible, certify_special, torsion_sanity_gcds
from torusforge.errors import UnsupportedParameterError
from torusforge.exactalg import (
    discriminant,
    factor_degree_pattern,
    is_prime,
    newton_polygon,
    primitive_root_check,
    sturm_count,
)
from torusforge.families import (
    AdmissibleQuadruple,
    max_c_without_real_roots,
    quadruple_polynomial,
    real_root_threshold_report,
    selmer,
    truncated_exponential_scaled,
)
from torusforge.exactalg import RatPolynomial
from torusforge.isogeny import trinomial_discriminant, trinomial_discriminant_closed_form
from torusforge.periods import build_period_lattice, char_poly_exact, companion_matrix
from torusforge.pipeline import (
    EXIT_CERTIFIED,
    EXIT_INCONCLUSIVE,
    EXIT_INVALID,
    EXIT_REFUTED,
    cmd_certify,
    cmd_family,
    cmd_verify_torus,
)
from torusforge.cli import main as cli_main
from torusforge.toruslab import ns_contained_in_homdual


def _report(number: int, budget: float, started: float, detail: str):
    elapsed = time.time() - started
    assert elapsed < budget, f"criterion {number} took {elapsed:.1f}s (budget {budget}s)"
    print(f"ACCEPTANCE {number} PASS ({elapsed:.1f}s / {budget:.0f}s budget): {detail}")


def _full_pipeline(f, tmp_store, g):
    code, cert_payload = cmd_certify(f)
    assert code == EXIT_CERTIFIED, f"certify failed: {cert_payload}"
    code, verify_payload = cmd_verify_torus(f)
    assert code == EXIT_CERTIFIED, f"verify failed: {verify_payload}"
    assert verify_payload["ranks"] == {
        "Endomorphism": 2 * g,
        "NeronSeveri": 0,
        "HomDual": 0,
    }
    assert verify_payload["precisions"] == [256, 512]
    assert all(verify_payload["two_precision_agreement"].values())
    assert verify_payload["endomorphism_generators_in_QC"] is True
    assert verify_payload["automorphisms"] == {
        "free_rank": g - 1,
        "kind": "AutomorphismReport",
        "schema": "torus-forge/1",
        "torsion_order": 2,
    }
    return verify_payload


def test_criterion_1_selmer_end_to_end(tmp_store):
    t0 = time.time()
    f = selmer(2).to_rat()
    payload = _full_pipeline(f, tmp_store, g=2)
    _report(1, 30, t0, f"x^4+x+1 ranks {payload['ranks']} at 256/512 bits, Q[C] witnesses exact")


def test_criterion_2_truncated_exponential_g2_and_g3(tmp_store):
    for g, budget in ((2, 120), (3, 120)):
        t0 = time.time()
        f = truncated_exponential_scaled(2 * g).to_rat()
        payload = _full_pipeline(f, tmp_store, g=g)
        _report(2, budget, t0, f"(2g)!*exp_{2*g} ranks {payload['ranks']}, automorphisms Z/2 x Z^{g-1}")


def test_criterion_3_quadruple_g2(tmp_store):
    t0 = time.time()
    assert max_c_without_real_roots(2, 3, 7, 5) == -16
    q = AdmissibleQuadruple(2, 3, 7, 5, -16)
    f = quadruple_polynomial(q)

    irr = certify_irreducible(f)
    assert irr.outcome == "certified"
    assert irr.evidence["route"] == "eisenstein-dumas" and irr.evidence["prime"] == 3
    np3 = newton_polygon(f, 3)
    assert np3.single_segment
    assert np3.segments[0].start == (0, Fraction(-3))
    assert np3.segments[0].end == (4, Fraction(0))
    assert np3.segments[0].interior_lattice_points == 0

    pat = factor_degree_pattern(f, 7)
    assert pat.squarefree and pat.degrees == (1, 3)

    res = certify_special(f, hint_primes=(3,))
    assert res.outcome == "certified"
    _report(3, 60, t0, "(3,7,5,-16): Eisenstein-Dumas at 3, pattern {1,3} at 7, special")


def test_criterion_4_discriminant_oracle_equivalence():
    t0 = time.time()
    assert trinomial_discriminant_closed_form(4, 1, 1) == 229
    assert discriminant(RatPolynomial([1, 1, 0, 0, 1])) == 229
    rng = random.Random(414)
    checked = 0
    while checked < 100:
        g = rng.choice([2, 3, 4])
        ells = [l for l in range(2, 2 * g) if (2 * g - 1) % l == 0 and is_prime(l)]
        l = rng.choice(ells)
        p = rng.choice([q for q in range(2, 60) if is_prime(q) and (q - 1) % (2 * g - 1) == 0])
        b = rng.randint(1, p - 1)
        if b % l == 0 or not primitive_root_check(b, p):
            continue
        c = rng.randint(-150, 150)
        if c == 0 or c % l == 0:
            continue
        q = AdmissibleQuadruple(g, l, p, b, c)
        assert trinomial_discriminant(q) == discriminant(quadruple_polynomial(q))
        checked += 1
    _report(4, 10, t0, "closed form == resultant on 100 random quadruples, disc(x^4+x+1)=229 both ways")


def test_criterion_5_square_torus_oracle(tmp_store):
    t0 = time.time()
    code, payload = cmd_verify_torus(None, fixture="square-torus")
    assert code == EXIT_CERTIFIED
    assert payload["ranks"] == {"Endomorphism": 8, "NeronSeveri": 4, "HomDual": 8}
    assert payload["exact_ranks"] == payload["ranks"]
    assert payload["paths_agree"] and payload["two_precision_agreement"]
    _report(5, 60, t0, "square torus (8,4,8) by LLL path and exact elimination, agreeing")


def test_criterion_6_family_of_three(tmp_store):
    t0 = time.time()
    code, payload = cmd_family(2, 3)
    assert code == EXIT_CERTIFIED
    assert payload["count"] == 3 and payload["complete"]
    assert set(payload["pairwise_witnesses"]) == {"0,1", "0,2", "1,2"}
    assert all(w is not None for w in payload["pairwise_witnesses"].values())
    # every entry carries a stored, verified SpecialTorus bundle hash
    from torusforge.pipeline import CertificateStore

    store = CertificateStore(tmp_store)
    for entry in payload["ledger"]["entries"]:
        cert = store.get_certificate(entry["special_torus"])
        assert cert.kind == "SpecialTorus" and cert.verified
    _report(6, 300, t0, f"3 quadruples, witnesses {payload['pairwise_witnesses']}")


def test_criterion_7_negative_controls(tmp_store, capsys):
    t0 = time.time()
    code = cli_main(["certify", "x^4+1", "--json"])
    assert code in (EXIT_REFUTED, EXIT_INCONCLUSIVE)
    from torusforge.pipeline import CertificateStore

    store = CertificateStore(tmp_store)
    assert store.find(poly_hash(RatPolynomial([1, 0, 0, 0, 1])), "NoProperSubfield") is None

    gcds = torsion_sanity_gcds(RatPolynomial([1, 0, -1, 0, 1]))
    assert gcds[12] == 4  # x^4 - x^2 + 1 divides x^12 - 1

    with pytest.raises(UnsupportedParameterError):
        selmer(4)
    assert cli_main(["generate", "selmer", "--g", "4", "--json"]) == EXIT_INVALID
    assert cli_main(["certify", "x^3+x+1", "--json"]) == EXIT_INVALID
    capsys.readouterr()
    _report(7, 60, t0, "x^4+1 not special, cyclotomic gcd caught, selmer(4) rejected, exit codes correct")


def test_criterion_8_invariant_suite():
    t0 = time.time()
    polys = [
        selmer(2).to_rat(),
        quadruple_polynomial(AdmissibleQuadruple(2, 3, 7, 5, -16)),
        truncated_exponential_scaled(4).to_rat(),
        truncated_exponential_scaled(6).to_rat(),
    ]
    for f in polys:
        for prec in (256, 512):
            lat = build_period_lattice(f, prec)
            r1, r2 = lat.invariant_residuals()
            tol = mp.mpf(2) ** (-(prec // 2))
            assert r1 < tol and r2 < tol, f"{f.coeffs} at {prec}"
        assert char_poly_exact(companion_matrix(f)).coeffs == f.monic().coeffs

    from torusforge.toruslab import hom_dual_rank, neron_severi_rank

    lat = build_period_lattice(polys[0], 256)
    ns, hd = neron_severi_rank(lat), hom_dual_rank(lat)
    assert ns_contained_in_homdual(ns, hd)
    _report(8, 240, t0, "J^2=-I and JC=CJ below 2^(-prec/2) at 256 and 512; charpoly exact; NS in HomDual")


def test_criterion_9_threshold_open_question_guard():
    t0 = time.time()
    heads = [(2, 3, 7, 5), (2, 3, 13, 2), (2, 3, 7, 10), (3, 5, 11, 2), (3, 5, 11, 6), (4, 7, 29, 2)]
    for (g, l, p, b) in heads:
        rep = real_root_threshold_report(g, l, p, b)
        with mp.workprec(160):
            corrected_floor = int(mp.floor(rep.corrected_factor_threshold))
            published_floor = int(mp.floor(rep.published_factor_threshold))
        assert corrected_floor == rep.sturm_max_c, (g, l, p, b)
        assert published_floor != rep.sturm_max_c, (g, l, p, b)
        # exact confirmation on both sides of the Sturm maximum
        from torusforge.families import _trinomial

        assert sturm_count(_trinomial(g, l, p, b, rep.sturm_max_c)) == 0
        assert sturm_count(_trinomial(g, l, p, b, rep.sturm_max_c + 1)) > 0

    # and both values land in the stored certificate for quadruple runs
    meta_holder = certify_special(
        quadruple_polynomial(AdmissibleQuadruple(2, 3, 7, 5, -16)),
        hint_primes=(3,),
        family_metadata={
            "kind": "quadruple",
            "parameters": [2, 3, 7, 5, -16],
            "real_root_thresholds": {
                "corrected_factor": "-15.58",
                "published_factor": "1.04",
                "sturm_max_c": -16,
            },
        },
    )
    assert meta_holder.bundle.evidence["family"]["real_root_thresholds"]["sturm_max_c"] == -16
    _report(9, 60, t0, "Sturm maximum matches corrected closed form, contradicts published form, recorded")

"""Configuration, certificate persistence, and the end-to-end commands
behind the CLI.

Command functions return (exit_code, payload); the contract is
  0 certified / verified,  2 refuted,  3 inconclusive,  4 invalid input.
Payloads contain only exact data (ints, decimal strings, booleans), so
identical inputs and configuration produce byte-identical JSON.
"""

from __future__ import annotations

import os
import tempfile
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .canon import canonical_dumps, poly_from_json, poly_hash, poly_to_json
from .certify import (
    CERTIFIED,
    INCONCLUSIVE,
    REFUTED,
    Certificate,
    certify_special,
    verify_certificate,
)
from .errors import (
    DependencyError,
    InvalidInputError,
    StoreError,
    TorusForgeError,
)
from .exactalg import RatPolynomial, as_rat
from .families import (
    AdmissibleQuadruple,
    FamilySpec,
    SearchBudget,
    enumerate_quadruples,
    quadruple_polynomial,
    selmer,
    truncated_exponential,
    truncated_exponential_scaled,
)
from .isogeny import (
    extend_family,
    family_metadata_for_quadruple,
    non_isogeny_witness,
    seed_ledger,
)
from .periods import build_period_lattice
from .toruslab import (
    automorphism_report,
    endomorphism_lattice,
    exact_rank,
    hom_dual_rank,
    neron_severi_rank,
    ns_contained_in_homdual,
    rational_structure_ranks,
    square_torus_complex_structure,
)

EXIT_CERTIFIED = 0
EXIT_REFUTED = 2
EXIT_INCONCLUSIVE = 3
EXIT_INVALID = 4

STORE_ENV = "TORUS_FORGE_STORE"
DEFAULT_STORE = "torus_forge_store"


@dataclass
class RunConfig:
    precision: int = 256
    prime_budget: int = 100
    lll_delta: Fraction = Fraction(99, 100)
    embedding_bitmask: int = 0
    store_path: Optional[str] = None
    seed: int = 0

    def validate(self) -> "RunConfig":
        if not 128 <= self.precision <= 4096:
            raise InvalidInputError("precision must lie in [128, 4096]")
        if not Fraction(1, 4) < Fraction(self.lll_delta) < 1:
            raise InvalidInputError("lll_delta must lie in (1/4, 1)")
        if self.prime_budget < 1:
            raise InvalidInputError("prime_budget must be positive")
        return self

    def resolved_store(self) -> str:
        return self.store_path or os.environ.get(STORE_ENV, DEFAULT_STORE)


class CertificateStore:
    """Content-addressed certificate files plus an index by (polynomial
    hash, kind).  Writes are atomic (temp file then rename); loads re-verify
    the certificate against the stored polynomial."""

    def __init__(self, path: str):
        self.path = path
        os.makedirs(os.path.join(path, "certs"), exist_ok=True)
        os.makedirs(os.path.join(path, "polys"), exist_ok=True)
        os.makedirs(os.path.join(path, "reports"), exist_ok=True)

    # -- low-level ---------------------------------------------------------

    def _write_atomic(self, final_path: str, text: str):
        fd, tmp = tempfile.mkstemp(dir=os.path.dirname(final_path), suffix=".tmp")
        try:
            with os.fdopen(fd, "w") as fh:
                fh.write(text)
            os.replace(tmp, final_path)
        finally:
            if os.path.exists(tmp):
                os.unlink(tmp)

    def _index_path(self) -> str:
        return os.path.join(self.path, "index.json")

    def _read_index(self) -> dict:
        import json

        if not os.path.exists(self._index_path()):
            return {}
        with open(self._index_path()) as fh:
            return json.load(fh)

    def _write_index(self, idx: dict):
        self._write_atomic(self._index_path(), canonical_dumps(idx))

    # -- public ------------------------------------------------------------

    def put_polynomial(self, f) -> str:
        h = poly_hash(f)
        self._write_atomic(
            os.path.join(self.path, "polys", f"{h}.json"),
            canonical_dumps(poly_to_json(f)),
        )
        return h

    def get_polynomial(self, h: str):
        import json

        p = os.path.join(self.path, "polys", f"{h}.json")
        if not os.path.exists(p):
            raise StoreError(f"unknown polynomial {h}")
        with open(p) as fh:
            return poly_from_json(json.load(fh))

    def put_certificate(self, cert: Certificate, f) -> str:
        self.put_polynomial(f)
        h = cert.hash
        self._write_atomic(
            os.path.join(self.path, "certs", f"{h}.json"),
            canonical_dumps(cert.to_json_dict()),
        )
        idx = self._read_index()
        idx[f"{cert.subject}:{cert.kind}"] = h
        self._write_index(idx)
        return h

    def get_certificate(self, h: str) -> Certificate:
        import json

        p = os.path.join(self.path, "certs", f"{h}.json")
        if not os.path.exists(p):
            raise StoreError(f"unknown certificate {h}")
        with open(p) as fh:
            cert = Certificate.from_json_dict(json.load(fh))
        if cert.hash != h:
            raise StoreError(f"certificate file {h} fails content addressing")
        f = self.get_polynomial(cert.subject)
        if not verify_certificate(cert, f):
            raise StoreError(f"certificate {h} failed re-verification on load")
        return cert

    def find(self, polyhash: str, kind: str) -> Optional[Certificate]:
        idx = self._read_index()
        h = idx.get(f"{polyhash}:{kind}")
        return self.get_certificate(h) if h else None

    def put_report(self, name: str, payload: dict):
        self._write_atomic(
            os.path.join(self.path, "reports", f"{name}.json"), canonical_dumps(payload)
        )

    def certificates_for(self, polyhash: str) -> dict:
        idx = self._read_index()
        out = {}
        for key, h in idx.items():
            subject, kind = key.rsplit(":", 1)
            if subject == polyhash:
                out[kind] = h
        return out


# ---------------------------------------------------------------------------
# polynomial parsing (CLI convenience)


def parse_polynomial(text: str) -> RatPolynomial:
    """Accepts the JSON wire form '["1","1","0","0","1"]' or a compact
    expression like 'x^4 - 5x + 112/27'."""
    import json
    import re

    text = text.strip()
    if text.startswith("["):
        return poly_from_json(json.loads(text))
    expr = text.replace(" ", "").replace("**", "^").replace("*", "")
    if not expr:
        raise InvalidInputError("empty polynomial")
    token = re.compile(r"([+-]?[^+-]+)")
    coeffs: dict = {}
    for term in token.findall(expr):
        m = re.fullmatch(r"([+-]?)(\d+(?:/\d+)?)?(x(?:\^(\d+))?)?", term)
        if not m or (m.group(2) is None and m.group(3) is None):
            raise InvalidInputError(f"cannot parse term {term!r}")
        sign = -1 if m.group(1) == "-" else 1
        coef = Fraction(m.group(2)) if m.group(2) else Fraction(1)
        if m.group(3):
            power = int(m.group(4)) if m.group(4) else 1
        else:
            power = 0
        coeffs[power] = coeffs.get(power, Fraction(0)) + sign * coef
    top = max(coeffs)
    return RatPolynomial([coeffs.get(k, Fraction(0)) for k in range(top + 1)])


# ---------------------------------------------------------------------------
# commands


def cmd_generate(kind: str, g: int, quadruple=None, auto: bool = False, p_max: int = 200, config: Optional[RunConfig] = None) -> tuple:
    config = (config or RunConfig()).validate()
    if kind == "selmer":
        f = selmer(g).to_rat()
        spec = FamilySpec(kind="selmer", g=g)
        extra = {}
    elif kind == "exp":
        f = truncated_exponential(2 * g)
        spec = FamilySpec(kind="truncated-exponential", g=g)
        extra = {"integer_rescaling": poly_to_json(truncated_exponential_scaled(2 * g))}
    elif kind == "quadruple":
        if auto:
            try:
                q = next(iter(enumerate_quadruples(g, SearchBudget(p_max=p_max))))
            except StopIteration:
                raise InvalidInputError(f"no admissible quadruple with p <= {p_max}")
        elif quadruple is not None:
            l, p, b, c = quadruple
            q = AdmissibleQuadruple(g=g, l=l, p=p, b=b, c=c).validate()
        else:
            raise InvalidInputError("quadruple generation needs --auto or explicit parameters")
        f = quadruple_polynomial(q)
        spec = FamilySpec(kind="quadruple", g=g, quadruple=q)
        extra = {"quadruple": list(q.as_tuple())}
    else:
        raise InvalidInputError(f"unknown family kind {kind!r}")
    payload = {
        "schema": "torus-forge/1",
        "command": "generate",
        "family": spec.to_json_dict(),
        "polynomial": poly_to_json(f),
        "polynomial_hash": poly_hash(f),
    }
    payload.update(extra)
    store = CertificateStore(config.resolved_store())
    store.put_polynomial(f)
    store.put_report(f"famspec-{poly_hash(f)}", spec.to_json_dict())
    return EXIT_CERTIFIED, payload


def _family_metadata_for_spec(spec: Optional[FamilySpec]) -> Optional[dict]:
    if spec is None:
        return None
    if spec.kind != "quadruple":
        return {"kind": spec.kind, "g": spec.g}
    return family_metadata_for_quadruple(spec.quadruple)


def cmd_certify(f, config: Optional[RunConfig] = None, family_spec: Optional[FamilySpec] = None) -> tuple:
    config = (config or RunConfig()).validate()
    f = as_rat(f)
    if f.degree < 4 or f.degree % 2:
        raise InvalidInputError("certification needs even degree >= 4")
    store = CertificateStore(config.resolved_store())
    subject = poly_hash(f)

    cached = store.find(subject, "SpecialTorus")
    if cached is not None and cached.verified:
        return EXIT_CERTIFIED, {
            "schema": "torus-forge/1",
            "command": "certify",
            "outcome": cached.outcome,
            "polynomial_hash": subject,
            "bundle": cached.hash,
            "cached": True,
        }

    hint = ()
    if family_spec is not None and family_spec.kind == "quadruple":
        hint = (family_spec.quadruple.l,)
    result = certify_special(
        f,
        prime_budget=config.prime_budget,
        hint_primes=hint,
        family_metadata=_family_metadata_for_spec(family_spec),
    )
    for cert in result.components.values():
        store.put_certificate(cert, f)
    code = {CERTIFIED: EXIT_CERTIFIED, REFUTED: EXIT_REFUTED, INCONCLUSIVE: EXIT_INCONCLUSIVE}[result.outcome]
    payload = {
        "schema": "torus-forge/1",
        "command": "certify",
        "outcome": result.outcome,
        "polynomial_hash": subject,
        "failed_stage": result.failed_stage,
        "components": {k: c.outcome for k, c in result.components.items()},
        "bundle": result.bundle.hash if result.bundle else None,
        "cached": False,
    }
    return code, payload


def cmd_verify_torus(
    f,
    config: Optional[RunConfig] = None,
    force: bool = False,
    fixture: Optional[str] = None,
) -> tuple:
    config = (config or RunConfig()).validate()
    store = CertificateStore(config.resolved_store())

    if fixture == "square-torus":
        j0 = square_torus_complex_structure(2)
        reports = rational_structure_ranks(j0, config.precision, config.lll_delta)
        exact = {kind: exact_rank(kind, j0)[0] for kind in reports}
        payload = {
            "schema": "torus-forge/1",
            "command": "verify-torus",
            "fixture": "square-torus",
            "ranks": {k: r.rank for k, r in reports.items()},
            "exact_ranks": exact,
            "paths_agree": all(reports[k].rank == exact[k] for k in reports),
            "two_precision_agreement": all(r.agreement for r in reports.values()),
        }
        ok = payload["paths_agree"] and payload["two_precision_agreement"]
        return (EXIT_CERTIFIED if ok else EXIT_REFUTED), payload

    f = as_rat(f)
    subject = poly_hash(f)
    bundle = store.find(subject, "SpecialTorus")
    if bundle is None and not force:
        raise DependencyError(
            "no SpecialTorus certificate in store; run certify first or pass --force"
        )

    lattice = build_period_lattice(
        f,
        config.precision,
        embedding_bitmask=config.embedding_bitmask,
        seed=config.seed,
    )
    endo = endomorphism_lattice(lattice, config.lll_delta)
    ns = neron_severi_rank(lattice, config.lll_delta)
    hd = hom_dual_rank(lattice, config.lll_delta)
    torsion_ok = bundle is not None and bundle.verified
    autos = None
    autos_error = None
    try:
        autos = automorphism_report(lattice, endo, torsion_ok)
    except DependencyError as exc:
        autos_error = str(exc)

    g = lattice.g
    expected = {"Endomorphism": 2 * g, "NeronSeveri": 0, "HomDual": 0}
    ranks = {"Endomorphism": endo.rank, "NeronSeveri": ns.rank, "HomDual": hd.rank}
    matches = {k: ranks[k] == expected[k] for k in expected}
    payload = {
        "schema": "torus-forge/1",
        "command": "verify-torus",
        "polynomial_hash": subject,
        "g": g,
        "precisions": list(endo.precisions),
        "ranks": ranks,
        "expected_ranks": expected,
        "rank_matches": matches,
        "two_precision_agreement": {
            "Endomorphism": endo.agreement,
            "NeronSeveri": ns.agreement,
            "HomDual": hd.agreement,
        },
        "rank_zero_certified": {
            "NeronSeveri": ns.rank_zero_certified,
            "HomDual": hd.rank_zero_certified,
        },
        "endomorphism_generators_in_QC": None
        if endo.witnesses is None
        else all(w.q_coefficients is not None for w in endo.witnesses),
        "ns_contained_in_homdual": ns_contained_in_homdual(ns, hd),
        "automorphisms": None if autos is None else autos.to_json_dict(),
        "automorphisms_error": autos_error,
        "reports": {
            "Endomorphism": endo.to_json_dict(),
            "NeronSeveri": ns.to_json_dict(),
            "HomDual": hd.to_json_dict(),
        },
    }
    verdict_ok = (
        all(matches.values())
        and all(payload["two_precision_agreement"].values())
        and payload["endomorphism_generators_in_QC"]
        and autos is not None
        and autos.free_rank == g - 1
    )
    payload["verdict"] = "verified" if verdict_ok else "mismatch"
    store.put_report(f"verify-{subject}-p{config.precision}", payload)
    return (EXIT_CERTIFIED if verdict_ok else EXIT_REFUTED), payload


def cmd_family(g: int, count: int, config: Optional[RunConfig] = None, p_max: int = 200) -> tuple:
    config = (config or RunConfig()).validate()
    if count < 1:
        raise InvalidInputError("count must be >= 1")
    store = CertificateStore(config.resolved_store())

    try:
        q = next(iter(enumerate_quadruples(g, SearchBudget(p_max=p_max))))
    except StopIteration:
        raise InvalidInputError(f"no admissible quadruple with p <= {p_max}")
    f = quadruple_polynomial(q)
    spec = FamilySpec(kind="quadruple", g=g, quadruple=q)
    code, _ = cmd_certify(f, config, family_spec=spec)
    if code != EXIT_CERTIFIED:
        return code, {"schema": "torus-forge/1", "command": "family", "error": "seed certification failed"}
    bundle = CertificateStore(config.resolved_store()).find(poly_hash(f), "SpecialTorus")
    ledger = seed_ledger(q, bundle.hash)

    for _ in range(count - 1):
        ledger = extend_family(ledger, prime_budget=config.prime_budget)
        new = ledger.entries[-1]
        fq = quadruple_polynomial(new.quadruple)
        # re-run the (deterministic) chain to persist the same bundle the
        # extension certified
        res = certify_special(
            fq,
            prime_budget=config.prime_budget,
            hint_primes=(new.quadruple.l,),
            family_metadata=_family_metadata_for_spec(
                FamilySpec(kind="quadruple", g=g, quadruple=new.quadruple)
            ),
        )
        if res.bundle is None or res.bundle.hash != new.special_hash:
            raise TorusForgeError("extension bundle does not match re-certification")
        for cert in res.components.values():
            store.put_certificate(cert, fq)

    witnesses = {}
    n = len(ledger.entries)
    for i in range(n):
        for j in range(i + 1, n):
            w = non_isogeny_witness(ledger.entries[i], ledger.entries[j])
            witnesses[f"{i},{j}"] = w
    payload = {
        "schema": "torus-forge/1",
        "command": "family",
        "g": g,
        "count": n,
        "ledger": ledger.to_json_dict(),
        "pairwise_witnesses": witnesses,
        "complete": all(w is not None for w in witnesses.values()),
    }
    store.put_report(f"family-g{g}-n{n}", payload)
    code = EXIT_CERTIFIED if payload["complete"] else EXIT_INCONCLUSIVE
    return code, payload


def cmd_show(target: str, config: Optional[RunConfig] = None) -> tuple:
    config = (config or RunConfig()).validate()
    store = CertificateStore(config.resolved_store())
    try:
        cert = store.get_certificate(target)
        return EXIT_CERTIFIED, {
            "schema": "torus-forge/1",
            "command": "show",
            "certificate": cert.to_json_dict(),
            "hash": cert.hash,
        }
    except StoreError:
        pass
    certs = store.certificates_for(target)
    if not certs:
        raise InvalidInputError(f"nothing stored under {target}")
    return EXIT_CERTIFIED, {
        "schema": "torus-forge/1",
        "command": "show",
        "polynomial_hash": target,
        "certificates": certs,
    }

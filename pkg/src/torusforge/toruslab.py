"""Integer ranks of the endomorphism, Neron-Severi and Hom(T, T-dual)
lattices of a period lattice.

All three are integer near-kernels of linear conditions in the complex
structure J:

  endomorphisms:      M J - J M = 0             (integer matrices M)
  Hom(T, T-dual):     J^T B J - B = 0           (integer bilinear forms B)
  Neron-Severi:       same condition, B alternating

Each rank is computed twice, at the lattice precision and at double that
precision, and the two generator lattices must agree (equal Hermite normal
forms).  Endomorphism generators are verified exactly inside Q[C] where C
is the companion matrix.  Rank-0 claims additionally record the shortest
rejected vector of the reduced embedding, which must exceed 2^(prec/8).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

from mpmath import mp

from .errors import DependencyError, InvalidInputError
from .exactalg import (
    hnf,
    hnf_contains,
    integer_kernel,
    integer_near_kernel_report,
)
from .periods import PeriodLattice, build_period_lattice

KIND_ENDOMORPHISM = "Endomorphism"
KIND_NERON_SEVERI = "NeronSeveri"
KIND_HOM_DUAL = "HomDual"


# ---------------------------------------------------------------------------
# constraint matrices (generic over mpf / Fraction entries)


def endo_constraint_rows(j_mat) -> list:
    """Rows of the flattened map M -> M J - J M over the n^2 matrix entries."""
    n = len(j_mat)
    zero = j_mat[0][0] * 0
    rows = []
    for r in range(n):
        for s in range(n):
            row = []
            for i in range(n):
                for jj in range(n):
                    val = zero
                    if r == i:
                        val = val + j_mat[jj][s]
                    if s == jj:
                        val = val - j_mat[r][i]
                    row.append(val)
            rows.append(row)
    return rows


def bilinear_constraint_rows(j_mat, alternating: bool) -> list:
    """Rows of B -> J^T B J - B over the full matrix basis E_ij, or over the
    alternating basis E_ij - E_ji (i < j) when alternating=True."""
    n = len(j_mat)
    zero = j_mat[0][0] * 0
    if alternating:
        index = [(i, jj) for i in range(n) for jj in range(i + 1, n)]
    else:
        index = [(i, jj) for i in range(n) for jj in range(n)]
    rows = []
    for r in range(n):
        for s in range(n):
            row = []
            for (i, jj) in index:
                val = j_mat[i][r] * j_mat[jj][s]
                if alternating:
                    val = val - j_mat[jj][r] * j_mat[i][s]
                if (r, s) == (i, jj):
                    val = val - 1
                if alternating and (r, s) == (jj, i):
                    val = val + 1
                row.append(val + zero)
            rows.append(row)
    return rows


def _coords_to_matrix(kind: str, v, n: int) -> tuple:
    if kind == KIND_NERON_SEVERI:
        m = [[0] * n for _ in range(n)]
        t = 0
        for i in range(n):
            for jj in range(i + 1, n):
                m[i][jj] = v[t]
                m[jj][i] = -v[t]
                t += 1
        return tuple(tuple(r) for r in m)
    return tuple(tuple(v[i * n + jj] for jj in range(n)) for i in range(n))


def _constraint_rows(kind: str, j_mat) -> list:
    if kind == KIND_ENDOMORPHISM:
        return endo_constraint_rows(j_mat)
    if kind == KIND_NERON_SEVERI:
        return bilinear_constraint_rows(j_mat, alternating=True)
    if kind == KIND_HOM_DUAL:
        return bilinear_constraint_rows(j_mat, alternating=False)
    raise InvalidInputError(f"unknown kind {kind}")


# ---------------------------------------------------------------------------
# reports


@dataclass(frozen=True)
class EndomorphismWitness:
    """Integer matrix M with its exact expansion M = sum a_k C^k, when the
    expansion exists (q_coefficients None otherwise)."""

    matrix: tuple
    q_coefficients: Optional[tuple]


@dataclass(frozen=True)
class RankReport:
    kind: str
    rank: int
    generators: tuple  # integer matrices
    coordinate_hnf: tuple  # HNF rows in the coordinate space of the kind
    residuals: tuple  # sup-norm residual per generator, finer precision
    precisions: tuple
    agreement: bool
    residual_tol: object  # tolerance of the coarser precision
    shortest_rejected: tuple  # per precision; None where everything accepted
    rank_zero_certified: bool
    witnesses: Optional[tuple] = None  # EndomorphismWitness, endomorphisms only

    def to_json_dict(self) -> dict:
        def bound_log2(x):
            if x is None:
                return None
            with mp.workprec(64):
                return int(mp.floor(mp.log(x, 2)))

        return {
            "schema": "torus-forge/1",
            "kind": f"RankReport/{self.kind}",
            "rank": self.rank,
            "generators": [[[str(x) for x in row] for row in m] for m in self.generators],
            "precisions": list(self.precisions),
            "agreement": self.agreement,
            "residual_tol_log2": -int(self.precisions[0]) // 4,
            "residuals_below_tol": True,
            "rank_zero_certified": self.rank_zero_certified,
            "shortest_rejected_log2": [bound_log2(x) for x in self.shortest_rejected],
            "q_coefficients": None
            if self.witnesses is None
            else [
                None if w.q_coefficients is None else [str(c) for c in w.q_coefficients]
                for w in self.witnesses
            ],
        }


# ---------------------------------------------------------------------------
# the two-precision protocol


def _run_once(kind: str, j_mat, prec: int, delta) -> tuple:
    # the mpf sums in the constraint builders must run at working precision
    with mp.workprec(prec + 64):
        rows = _constraint_rows(kind, j_mat)
    rep = integer_near_kernel_report(
        rows,
        scale=1 << (prec // 2),
        residual_tol=mp.mpf(2) ** (-(prec // 4)),
        entry_precision=prec + 64,
        delta=delta,
        norm_bound=1 << (prec // 8),
    )
    return rep, rows


def _residual(rows, v, prec: int):
    with mp.workprec(prec + 16):
        worst = mp.mpf(0)
        for row in rows:
            s = mp.mpf(0)
            for entry, vi in zip(row, v):
                if vi:
                    s += (mp.mpf(entry.numerator) / entry.denominator if isinstance(entry, Fraction) else entry) * vi
            worst = max(worst, abs(s))
        return worst


def rank_from_structures(
    kind: str,
    j_at: Callable[[int], list],
    precision: int,
    delta=Fraction(99, 100),
    companion=None,
) -> RankReport:
    """Run the two-precision near-kernel protocol for one lattice kind.

    j_at(prec) must deterministically produce the complex structure at the
    requested precision.
    """
    prec1, prec2 = precision, 2 * precision
    j1 = j_at(prec1)
    n = len(j1)
    rep1, _ = _run_once(kind, j1, prec1, delta)
    rep2, rows2 = _run_once(kind, j_at(prec2), prec2, delta)

    agreement = rep1.generators == rep2.generators
    gens_hnf = list(rep2.generators)
    if kind == KIND_ENDOMORPHISM:
        ident = [0] * (n * n)
        for i in range(n):
            ident[i * n + i] = 1
        if not gens_hnf or not hnf_contains(gens_hnf, ident):
            gens_hnf = hnf(list(gens_hnf) + [ident])

    matrices = tuple(_coords_to_matrix(kind, v, n) for v in gens_hnf)
    residuals = tuple(_residual(rows2, v, prec2) for v in gens_hnf)

    witnesses = None
    if kind == KIND_ENDOMORPHISM and companion is not None:
        witnesses = tuple(verify_in_QC(m, companion) for m in matrices)

    shortest = (rep1.shortest_rejected_norm, rep2.shortest_rejected_norm)
    rank_zero_certified = False
    if not rep1.generators and not rep2.generators:
        with mp.workprec(prec2):
            rank_zero_certified = (
                shortest[0] is not None
                and shortest[1] is not None
                and shortest[0] > mp.mpf(2) ** (prec1 // 8)
                and shortest[1] > mp.mpf(2) ** (prec2 // 8)
            )

    return RankReport(
        kind=kind,
        rank=len(gens_hnf),
        generators=matrices,
        coordinate_hnf=tuple(tuple(v) for v in gens_hnf),
        residuals=residuals,
        precisions=(prec1, prec2),
        agreement=agreement,
        residual_tol=mp.mpf(2) ** (-(prec1 // 4)),
        shortest_rejected=shortest,
        rank_zero_certified=rank_zero_certified,
        witnesses=witnesses,
    )


def _lattice_j_provider(lattice: PeriodLattice):
    base = {lattice.precision: [list(r) for r in lattice.J]}

    def j_at(prec: int) -> list:
        if prec not in base:
            rebuilt = build_period_lattice(
                lattice.f,
                prec,
                embedding_bitmask=lattice.embedding_bitmask,
                seed=lattice.seed,
            )
            base[prec] = [list(r) for r in rebuilt.J]
        return base[prec]

    return j_at


def endomorphism_lattice(lattice: PeriodLattice, delta=Fraction(99, 100)) -> RankReport:
    """Rank and generators of the integer matrices commuting with J.

    The identity is always a member; every generator is expanded exactly in
    Q[C].  Generators failing the exact expansion trigger one automatic
    doubling of the precision pair before reporting.
    """
    report = rank_from_structures(
        KIND_ENDOMORPHISM,
        _lattice_j_provider(lattice),
        lattice.precision,
        delta,
        companion=lattice.companion,
    )
    if report.witnesses and any(w.q_coefficients is None for w in report.witnesses):
        doubled = build_period_lattice(
            lattice.f,
            2 * lattice.precision,
            embedding_bitmask=lattice.embedding_bitmask,
            seed=lattice.seed,
        )
        report = rank_from_structures(
            KIND_ENDOMORPHISM,
            _lattice_j_provider(doubled),
            doubled.precision,
            delta,
            companion=lattice.companion,
        )
    return report


def neron_severi_rank(lattice: PeriodLattice, delta=Fraction(99, 100)) -> RankReport:
    """Rank of the alternating integer forms B with J^T B J = B."""
    return rank_from_structures(
        KIND_NERON_SEVERI, _lattice_j_provider(lattice), lattice.precision, delta
    )


def hom_dual_rank(lattice: PeriodLattice, delta=Fraction(99, 100)) -> RankReport:
    """Rank of all integer bilinear forms B with J^T B J = B."""
    return rank_from_structures(
        KIND_HOM_DUAL, _lattice_j_provider(lattice), lattice.precision, delta
    )


def ns_contained_in_homdual(ns: RankReport, hd: RankReport) -> bool:
    """Alternating forms are forms: the NS lattice must embed in HomDual."""
    if not ns.generators:
        return True
    n = len(ns.generators[0])
    hd_hnf = hnf([list(v) for v in hd.coordinate_hnf]) if hd.coordinate_hnf else []
    for m in ns.generators:
        flat = [m[i][j] for i in range(n) for j in range(n)]
        if not hd_hnf or not hnf_contains(hd_hnf, flat):
            return False
    return True


# ---------------------------------------------------------------------------
# exact verification inside Q[C]


def verify_in_QC(matrix, companion) -> EndomorphismWitness:
    """Solve M = sum a_k C^k exactly over Q; q_coefficients is None when the
    system is inconsistent (M outside the commutative subalgebra Q[C])."""
    n = len(companion)
    powers = [_identity_frac(n)]
    comp = [[Fraction(x) for x in row] for row in companion]
    for _ in range(n - 1):
        powers.append(_mat_mul_frac(comp, powers[-1]))
    # columns: flatten(C^k); solve least system A a = flatten(M)
    cols = [[p[i][j] for i in range(n) for j in range(n)] for p in powers]
    target = [Fraction(matrix[i][j]) for i in range(n) for j in range(n)]
    sol = _solve_exact(cols, target)
    return EndomorphismWitness(
        matrix=tuple(tuple(int(x) for x in row) for row in matrix),
        q_coefficients=None if sol is None else tuple(sol),
    )


def _identity_frac(n):
    return [[Fraction(1 if i == j else 0) for j in range(n)] for i in range(n)]


def _mat_mul_frac(a, b):
    n = len(a)
    return [[sum(a[i][t] * b[t][j] for t in range(n)) for j in range(n)] for i in range(n)]


def _solve_exact(cols, target):
    """Solve sum_k a_k cols[k] = target over Q; None if inconsistent."""
    nvars = len(cols)
    rows = len(target)
    aug = [[cols[k][r] for k in range(nvars)] + [target[r]] for r in range(rows)]
    pivots = []
    r = 0
    for c in range(nvars):
        pr = next((i for i in range(r, rows) if aug[i][c] != 0), None)
        if pr is None:
            continue
        aug[r], aug[pr] = aug[pr], aug[r]
        pv = aug[r][c]
        aug[r] = [x / pv for x in aug[r]]
        for i in range(rows):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    for i in range(r, rows):
        if aug[i][nvars] != 0:
            return None
    sol = [Fraction(0)] * nvars
    for row_i, c in enumerate(pivots):
        sol[c] = aug[row_i][nvars]
    return sol


# ---------------------------------------------------------------------------
# square-torus fixture and the exact rational oracle path


def square_torus_complex_structure(g: int = 2) -> tuple:
    """Complex structure of the g-fold product of the Gaussian-integer
    elliptic curve: all data rational, so both the floating/LLL path and the
    exact path apply (ground truth for validating the machinery)."""
    n = 2 * g
    j = [[Fraction(0)] * n for _ in range(n)]
    for k in range(g):
        j[2 * k][2 * k + 1] = Fraction(-1)
        j[2 * k + 1][2 * k] = Fraction(1)
    return tuple(tuple(row) for row in j)


def exact_rank(kind: str, j_rational) -> tuple:
    """Exact integer kernel of the constraint system for a rational complex
    structure; returns (rank, generator matrices).  This is the independent
    route against which the LLL path is validated."""
    rows = _constraint_rows(kind, [[Fraction(x) for x in row] for row in j_rational])
    kern = integer_kernel(rows)
    n = len(j_rational)
    return len(kern), tuple(_coords_to_matrix(kind, v, n) for v in kern)


def rational_structure_ranks(j_rational, precision: int = 256, delta=Fraction(99, 100)) -> dict:
    """Run the floating/LLL two-precision path on an exactly rational J."""
    j_rows = [[Fraction(x) for x in row] for row in j_rational]

    def j_at(prec):
        return j_rows

    return {
        kind: rank_from_structures(kind, j_at, precision, delta)
        for kind in (KIND_ENDOMORPHISM, KIND_NERON_SEVERI, KIND_HOM_DUAL)
    }


# ---------------------------------------------------------------------------
# automorphism group structure


@dataclass(frozen=True)
class AutomorphismReport:
    """Unit-group shape of the endomorphism order: torsion {+-1} and free
    rank g - 1 by the Dirichlet unit theorem (r1 = 0, r2 = g); fundamental
    units are never computed."""

    torsion_order: int
    free_rank: int

    def to_json_dict(self) -> dict:
        return {
            "schema": "torus-forge/1",
            "kind": "AutomorphismReport",
            "torsion_order": self.torsion_order,
            "free_rank": self.free_rank,
        }


def automorphism_report(
    lattice: PeriodLattice, endo: RankReport, torsion_verified: bool
) -> AutomorphismReport:
    g = lattice.g
    if g < 2:
        raise DependencyError("automorphism structure needs g >= 2")
    if endo.kind != KIND_ENDOMORPHISM or endo.rank != 2 * g:
        raise DependencyError(f"endomorphism rank {endo.rank} != 2g = {2 * g}")
    if not endo.witnesses or any(w.q_coefficients is None for w in endo.witnesses):
        raise DependencyError("endomorphism generators lack exact Q[C] witnesses")
    if not torsion_verified:
        raise DependencyError("torsion-unit certificate {+-1} required")
    return AutomorphismReport(torsion_order=2, free_rank=g - 1)

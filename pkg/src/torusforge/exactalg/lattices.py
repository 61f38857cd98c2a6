"""Integer lattice algorithms: Hermite normal form, exact integer kernels,
LLL reduction, and near-kernel extraction from high-precision constraint
matrices.

LLL is the all-integer variant (Gram-Schmidt data held as integers
lambda[i][j], d[i] with mu = lambda/d), so reduction itself is exact; the
Lovasz condition of the output is additionally re-verified with exact
rational Gram-Schmidt.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from gmpy2 import mpz
from mpmath import mp

from ..errors import InvalidInputError, PrecisionError, RankDeficientError

# ---------------------------------------------------------------------------
# Hermite normal form and exact kernels


def hnf(rows: Sequence[Sequence[int]]) -> list:
    """Row-style Hermite normal form of the lattice spanned by the rows.

    Returns the nonzero rows: row-echelon, positive pivots, entries above a
    pivot reduced to [0, pivot).  Equal lattices have identical HNF.
    """
    m = [list(map(int, r)) for r in rows]
    if not m:
        return []
    ncols = len(m[0])
    row = 0
    for col in range(ncols):
        pivot = None
        for i in range(row, len(m)):
            if m[i][col]:
                pivot = i
                break
        if pivot is None:
            continue
        m[row], m[pivot] = m[pivot], m[row]
        # clear below via extended Euclid
        for i in range(row + 1, len(m)):
            while m[i][col]:
                q = m[row][col] // m[i][col]
                m[row] = [a - q * b for a, b in zip(m[row], m[i])]
                m[row], m[i] = m[i], m[row]
        if m[row][col] < 0:
            m[row] = [-a for a in m[row]]
        for i in range(row):
            q = m[i][col] // m[row][col]
            if q:
                m[i] = [a - q * b for a, b in zip(m[i], m[row])]
        row += 1
    return [r for r in m[:row] if any(r)]


def hnf_contains(container_hnf: list, vector: Sequence[int]) -> bool:
    """Membership of an integer vector in the lattice given by its HNF rows."""
    v = list(map(int, vector))
    pivots = [(next(j for j, a in enumerate(r) if a), r) for r in container_hnf]
    for col, row in pivots:
        if v[col] % row[col]:
            return False
        q = v[col] // row[col]
        if q:
            v = [a - q * b for a, b in zip(v, row)]
    return not any(v)


def lattice_contains(outer: Sequence[Sequence[int]], inner: Sequence[Sequence[int]]) -> bool:
    h = hnf(outer)
    return all(hnf_contains(h, v) for v in inner)


def integer_kernel(a_rows: Sequence[Sequence]) -> list:
    """Basis of the lattice {v in Z^n : A v = 0} for a matrix with integer or
    rational entries (rows are cleared of denominators first, which does not
    change the kernel).

    Works by row-reducing the block [I_n | A^T] over Z: rows whose right
    block vanishes have left block in the kernel, and the transform being
    unimodular makes those rows a basis of the full kernel lattice.
    """
    if not a_rows:
        raise InvalidInputError("empty matrix")
    ncols = len(a_rows[0])
    cleared = []
    for r in a_rows:
        fr = [Fraction(x) for x in r]
        den = math.lcm(*[f.denominator for f in fr]) if fr else 1
        cleared.append([int(f * den) for f in fr])
    # rows of the working matrix: (e_i | column i of A)
    work = []
    for i in range(ncols):
        left = [1 if j == i else 0 for j in range(ncols)]
        right = [row[i] for row in cleared]
        work.append(left + right)
    reduced = _row_echelon_z(work, pivot_cols=range(ncols, ncols + len(cleared)))
    kernel = [r[:ncols] for r in reduced if not any(r[ncols:])]
    return hnf(kernel)


def _row_echelon_z(m: list, pivot_cols) -> list:
    row = 0
    for col in pivot_cols:
        pivot = None
        for i in range(row, len(m)):
            if m[i][col]:
                pivot = i
                break
        if pivot is None:
            continue
        m[row], m[pivot] = m[pivot], m[row]
        for i in range(row + 1, len(m)):
            while m[i][col]:
                q = m[row][col] // m[i][col]
                m[row] = [a - q * b for a, b in zip(m[row], m[i])]
                m[row], m[i] = m[i], m[row]
        row += 1
    return m


def det_bareiss(rows: Sequence[Sequence[int]]) -> int:
    """Exact determinant of an integer matrix (fraction-free elimination)."""
    a = [list(map(int, r)) for r in rows]
    n = len(a)
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k]), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[-1][-1]


# ---------------------------------------------------------------------------
# LLL


@dataclass(frozen=True)
class ReducedLattice:
    """LLL-reduced basis plus the unimodular transform that produced it.

    gs_norms holds the exact rational squared Gram-Schmidt norms of the
    output basis, computed during post-hoc verification of the Lovasz
    condition for the recorded delta.
    """

    basis: tuple
    transform: tuple
    delta: Fraction
    gs_norms: tuple


def _exact_gram_schmidt(basis):
    """Exact rational GS data: (mu lower-triangular, squared norms)."""
    n = len(basis)
    mu = [[Fraction(0)] * n for _ in range(n)]
    star: list = []
    norms: list = []
    for i in range(n):
        v = [Fraction(x) for x in basis[i]]
        for j in range(i):
            if norms[j] == 0:
                raise RankDeficientError("dependent basis vectors")
            mu[i][j] = Fraction(sum(Fraction(a) * b for a, b in zip(basis[i], star[j]))) / norms[j]
            v = [x - mu[i][j] * y for x, y in zip(v, star[j])]
        star.append(v)
        norms.append(sum(x * x for x in v))
    if norms and norms[-1] == 0:
        raise RankDeficientError("dependent basis vectors")
    return mu, norms


def verify_lovasz(basis, delta: Fraction) -> list:
    """Exact check of size-reduction and the Lovasz condition; returns the
    squared GS norms.  Raises InvalidInputError on violation."""
    mu, norms = _exact_gram_schmidt(basis)
    n = len(basis)
    for i in range(n):
        for j in range(i):
            if abs(mu[i][j]) > Fraction(1, 2):
                raise InvalidInputError(f"size reduction fails at ({i},{j})")
    for k in range(1, n):
        if norms[k] < (delta - mu[k][k - 1] ** 2) * norms[k - 1]:
            raise InvalidInputError(f"Lovasz condition fails at {k}")
    return norms


def lll_reduce(basis: Sequence[Sequence[int]], delta: Fraction = Fraction(99, 100)) -> ReducedLattice:
    """LLL-reduce a basis of linearly independent integer vectors.

    All-integer arithmetic (de Weger's representation of Gram-Schmidt data);
    the result carries the accumulated unimodular transform and is verified
    exactly against the Lovasz condition before being returned.
    """
    delta = Fraction(delta)
    if not Fraction(1, 4) < delta < 1:
        raise InvalidInputError("delta must lie in (1/4, 1)")
    b = [list(map(int, row)) for row in basis]
    n = len(b)
    if n == 0:
        raise InvalidInputError("empty basis")
    transform = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    b_out, transform = _lll_integer(b, transform, delta)
    gs = verify_lovasz(b_out, delta)
    if abs(det_bareiss(transform)) != 1:
        raise InvalidInputError("transform not unimodular")  # pragma: no cover
    return ReducedLattice(
        basis=tuple(tuple(r) for r in b_out),
        transform=tuple(tuple(r) for r in transform),
        delta=delta,
        gs_norms=tuple(gs),
    )


def _lll_integer(b: list, u: list, delta: Fraction):
    """Core all-integer LLL loop; mutates and returns (basis, transform).

    Gram-Schmidt data is carried as integers (lam[i][j] = mu[i][j] * d[j+1],
    d[k] the Gramians), held as gmpy2 mpz for multi-kilobit speed.
    """
    n = len(b)
    zero = mpz(0)
    b = [[mpz(x) for x in row] for row in b]
    u = [[mpz(x) for x in row] for row in u]
    dnum, dden = mpz(delta.numerator), mpz(delta.denominator)
    d = [mpz(1)] * (n + 1)
    lam = [[zero] * n for _ in range(n)]

    for i in range(n):
        # incremental Gram-Schmidt over Z
        bi = b[i]
        for j in range(i + 1):
            bj = b[j]
            s = sum(a * c for a, c in zip(bi, bj))
            li, lj = lam[i], lam[j]
            for k in range(j):
                s = (d[k + 1] * s - li[k] * lj[k]) // d[k]
            if j < i:
                li[j] = s
            else:
                if s == 0:
                    raise RankDeficientError("dependent basis vectors")
                d[i + 1] = s

    def size_reduce(k, j):
        lk = lam[k]
        if 2 * abs(lk[j]) > d[j + 1]:
            q = (2 * lk[j] + d[j + 1]) // (2 * d[j + 1])
            b[k] = [a - q * c for a, c in zip(b[k], b[j])]
            u[k] = [a - q * c for a, c in zip(u[k], u[j])]
            lk[j] -= q * d[j + 1]
            lj = lam[j]
            for i in range(j):
                lk[i] -= q * lj[i]

    k = 1
    while k < n:
        size_reduce(k, k - 1)
        # Lovasz: d[k+1]*d[k-1] >= (delta - mu^2) d[k]^2 posed over integers
        if dden * (d[k + 1] * d[k - 1] + lam[k][k - 1] ** 2) < dnum * d[k] ** 2:
            b[k - 1], b[k] = b[k], b[k - 1]
            u[k - 1], u[k] = u[k], u[k - 1]
            lam_k, lam_km1 = lam[k], lam[k - 1]
            for j in range(k - 1):
                lam_km1[j], lam_k[j] = lam_k[j], lam_km1[j]
            lam_kk = lam_k[k - 1]
            d_new = (d[k - 1] * d[k + 1] + lam_kk * lam_kk) // d[k]
            for i in range(k + 1, n):
                li = lam[i]
                t = li[k]
                li[k] = (d[k + 1] * li[k - 1] - lam_kk * t) // d[k]
                li[k - 1] = (d_new * t + lam_kk * li[k]) // d[k + 1]
            d[k] = d_new
            k = max(k - 1, 1)
        else:
            for j in range(k - 2, -1, -1):
                size_reduce(k, j)
            k += 1
    return [[int(x) for x in row] for row in b], [[int(x) for x in row] for row in u]


# ---------------------------------------------------------------------------
# near-kernel extraction

# bits added per ladder stage; each stage LLL-reduces the previous stage's
# basis against the more finely scaled embedding
_LADDER_STEP = 32


@dataclass(frozen=True)
class NearKernelReport:
    """Outcome of one near-kernel extraction.

    generators: HNF rows of the lattice spanned by accepted integer vectors.
    A reduced vector is accepted when its residual is below the tolerance
    AND its embedded norm is below norm_bound: integer vectors merely close
    to an irrational real solution space can pass a residual test alone,
    but only at large height.  shortest_rejected_norm is the smallest
    embedded norm among non-accepted vectors (None if all accepted) -- the
    quantitative evidence behind a rank-0 claim.
    """

    generators: tuple
    scale: int
    residual_tol: object
    norm_bound: object
    shortest_rejected_norm: object
    precision: int


def integer_near_kernel_report(
    a_rows: Sequence[Sequence],
    scale: int,
    residual_tol,
    entry_precision: int,
    delta: Fraction = Fraction(99, 100),
    norm_bound=None,
) -> NearKernelReport:
    """Integer vectors v with ||A v||_inf below residual_tol, found by LLL on
    the embedding [I_n | round(scale * A^T)].

    The reduction runs through a ladder of increasing scales (each stage
    reduces the basis produced by the previous one), which keeps the swap
    count low; the final stage reduces the exact embedding at the requested
    scale, so the returned basis is an LLL-reduced basis of that lattice.
    entry_precision is the certified precision (bits) of the entries of A and
    must be at least log2(scale) + 64.
    """
    if scale <= 0:
        raise InvalidInputError("scale must be positive")
    if entry_precision < scale.bit_length() + 63:
        raise PrecisionError(
            f"entries carry {entry_precision} bits; need >= {scale.bit_length() + 63}"
        )
    n = len(a_rows[0]) if a_rows else 0
    if n == 0:
        raise InvalidInputError("empty constraint matrix")
    m = len(a_rows)

    cols = _scaled_columns(a_rows, scale, entry_precision)  # n lists of m ints

    ladder = []
    s = 1 << 24
    while s < scale:
        ladder.append(s)
        s <<= _LADDER_STEP
    loose = Fraction(3, 4)  # intermediate stages only pre-sort the basis

    u = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    for stage_scale in ladder:
        rows = _embed(u, cols, scale // stage_scale)
        _, stage_u = _lll_integer(rows, [[1 if a == c else 0 for c in range(n)] for a in range(n)], loose)
        u = _mat_mul_int(stage_u, u)

    # final reduction of the exact full-scale embedding at the requested delta
    final, u = _lll_integer(_embed(u, cols, 1), u, delta)
    verify_lovasz(final, delta)

    accepted = []
    shortest_rejected = None
    with mp.workprec(entry_precision + 16):
        tol = mp.mpf(residual_tol)
        bound = None if norm_bound is None else mp.mpf(norm_bound)
        for row in final:
            v = row[:n]
            if not any(v):
                continue
            norm = mp.sqrt(sum(mp.mpf(x) ** 2 for x in row))
            res = _residual_inf(a_rows, v, entry_precision)
            if res < tol and (bound is None or norm <= bound):
                accepted.append(v)
            elif shortest_rejected is None or norm < shortest_rejected:
                shortest_rejected = norm
    gens = hnf(accepted)
    return NearKernelReport(
        generators=tuple(tuple(r) for r in gens),
        scale=scale,
        residual_tol=residual_tol,
        norm_bound=norm_bound,
        shortest_rejected_norm=shortest_rejected,
        precision=entry_precision,
    )


def integer_near_kernel(
    a_rows, scale, residual_tol, entry_precision, delta=Fraction(99, 100), norm_bound=None
) -> list:
    """Generators (HNF rows) of the candidate integer near-kernel of A."""
    return [
        list(r)
        for r in integer_near_kernel_report(
            a_rows, scale, residual_tol, entry_precision, delta, norm_bound
        ).generators
    ]


def _rounded_div(x: int, d: int) -> int:
    if d == 1:
        return x
    q, r = divmod(x, d)
    return q + (1 if 2 * r >= d else 0)


def _embed(u: list, cols: list, shift: int) -> list:
    """Rows (u_i | round(cols^T u_i / shift)) of the scaled embedding."""
    n, m = len(u), len(cols[0])
    rows = []
    for ui in u:
        right = [
            _rounded_div(sum(ui[t] * cols[t][j] for t in range(n) if ui[t]), shift)
            for j in range(m)
        ]
        rows.append(list(ui) + right)
    return rows


def _mat_mul_int(a: list, b: list) -> list:
    n, k, m = len(a), len(b), len(b[0])
    out = [[0] * m for _ in range(n)]
    for i in range(n):
        ai = a[i]
        oi = out[i]
        for t in range(k):
            if ai[t]:
                at = ai[t]
                bt = b[t]
                for j in range(m):
                    if bt[j]:
                        oi[j] += at * bt[j]
    return out


def _scaled_columns(a_rows, scale: int, prec: int) -> list:
    """Column i -> [round(scale * A[j][i]) for j], computed at full precision."""
    m, n = len(a_rows), len(a_rows[0])
    cols = [[0] * m for _ in range(n)]
    with mp.workprec(prec + 16):
        for j, row in enumerate(a_rows):
            for i, entry in enumerate(row):
                cols[i][j] = int(mp.nint(_to_mpf(entry) * scale))
    return cols


def _to_mpf(x):
    if isinstance(x, Fraction):
        return mp.mpf(x.numerator) / x.denominator
    return mp.mpf(x)


def _residual_inf(a_rows, v, prec: int):
    """||A v||_inf evaluated at working precision."""
    with mp.workprec(prec + 16):
        worst = mp.mpf(0)
        for row in a_rows:
            s = mp.mpf(0)
            for entry, vi in zip(row, v):
                if vi:
                    s += _to_mpf(entry) * vi
            worst = max(worst, abs(s))
        return worst

"""Period lattices of even-degree polynomials without real roots.

Given f of degree 2g with roots a_1, conj(a_1), ..., a_g, conj(a_g), the
lattice generated by the vectors (a_1^k, ..., a_g^k), k = 0..2g-1, inside
C^g has, in the interleaved (Re, Im) real coordinates, a basis matrix S
whose k-th column lists Re and Im of the k-th power map at each chosen
root.  Multiplication by i is the block matrix J0, and the complex
structure in lattice coordinates is J = S^-1 J0 S.  Multiplication by the
residue class of x is the exact companion matrix of f, which commutes
with J.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from mpmath import mp

from .errors import (
    DependencyError,
    InvalidInputError,
    PrecisionExhaustedError,
)
from .exactalg import (
    RatPolynomial,
    as_rat,
    cauchy_root_bound,
    poly_gcd,
    sturm_count,
)

# ---------------------------------------------------------------------------
# small dense matrix helpers over mpf (lists of rows)


def mat_mul(a, b):
    n, k, m = len(a), len(b), len(b[0])
    return [
        [sum(a[i][t] * b[t][j] for t in range(k)) for j in range(m)]
        for i in range(n)
    ]


def mat_sub(a, b):
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_inf_norm(a):
    return max(sum(abs(x) for x in row) for row in a)


def mat_inverse(a):
    n = len(a)
    m = mp.matrix(a)
    inv = mp.inverse(m)
    return [[inv[i, j] for j in range(n)] for i in range(n)]


def max_abs_entry(a):
    return max(abs(x) for row in a for x in row)


def block_diag_i(g: int):
    """Multiplication by i on C^g in interleaved (Re, Im) coordinates."""
    n = 2 * g
    j0 = [[mp.mpf(0)] * n for _ in range(n)]
    for k in range(g):
        j0[2 * k][2 * k + 1] = mp.mpf(-1)
        j0[2 * k + 1][2 * k] = mp.mpf(1)
    return j0


# ---------------------------------------------------------------------------
# certified complex roots


@dataclass(frozen=True)
class CertifiedRoot:
    """A complex root with a residual-based inclusion radius.

    conjugate_partner is the index of the complex-conjugate root in the full
    (Re, Im)-sorted root list; a real root is its own partner.
    """

    value: object  # mpc
    error_radius: object  # mpf
    conjugate_partner: int

    @property
    def is_real(self) -> bool:
        return abs(mp.im(self.value)) <= self.error_radius


def _horner(coeffs, z):
    acc = mp.mpc(0)
    for c in reversed(coeffs):
        acc = acc * z + c
    return acc


def complex_roots(f, precision: int = 128, seed: int = 0) -> list:
    """All complex roots of a squarefree polynomial, simultaneously, to the
    requested precision (bits).

    Aberth-Ehrlich iteration from a perturbed circle of Cauchy-bound radius,
    then Newton polishing at doubled working precision.  Each root carries
    the inclusion radius deg(f) * |f(z)/f'(z)|; the disks of distinct roots
    must come out pairwise disjoint, else PrecisionExhaustedError.
    """
    f = as_rat(f)
    if f.degree < 1:
        raise InvalidInputError("need degree >= 1")
    if poly_gcd(f, f.derivative()).degree > 0:
        raise InvalidInputError("polynomial is not squarefree")
    n = f.degree
    monic = f.monic()
    rng = random.Random(seed)

    wp = precision + 64
    with mp.workprec(wp):
        coeffs = [mp.mpf(c.numerator) / c.denominator for c in monic.coeffs]
        dcoeffs = [mp.mpf((i * c).numerator) / (i * c).denominator
                   for i, c in enumerate(monic.coeffs)][1:]
        radius = mp.mpf(cauchy_root_bound(monic).numerator) / cauchy_root_bound(monic).denominator
        z = [
            radius * mp.exp(mp.mpc(0, 2) * mp.pi * (k + mp.mpf("0.354")) / n)
            * (1 + mp.mpf(rng.uniform(-1e-3, 1e-3)))
            for k in range(n)
        ]
        eps = mp.mpf(2) ** (-(wp - 8))
        for _ in range(64 + 8 * n):
            worst = mp.mpf(0)
            for i in range(n):
                fi = _horner(coeffs, z[i])
                dfi = _horner(dcoeffs, z[i])
                if dfi == 0:
                    z[i] += eps * (1 + abs(z[i]))
                    worst = radius
                    continue
                w = fi / dfi
                s = mp.mpc(0)
                for j in range(n):
                    if j != i:
                        s += 1 / (z[i] - z[j])
                denom = 1 - w * s
                step = w if denom == 0 else w / denom
                z[i] -= step
                worst = max(worst, abs(step))
            if worst < eps * max(1, int(radius)):
                break

    # Newton polishing and residual radii at doubled precision
    wp2 = 2 * precision + 64
    with mp.workprec(wp2):
        coeffs2 = [mp.mpf(c.numerator) / c.denominator for c in monic.coeffs]
        dcoeffs2 = [mp.mpf((i * c).numerator) / (i * c).denominator
                    for i, c in enumerate(monic.coeffs)][1:]
        polished = []
        for zi in z:
            w = mp.mpc(zi)
            for _ in range(4):
                dfw = _horner(dcoeffs2, w)
                if dfw == 0:
                    break
                w = w - _horner(coeffs2, w) / dfw
            fw = _horner(coeffs2, w)
            dfw = _horner(dcoeffs2, w)
            rad = mp.mpf(n) * abs(fw / dfw) if dfw != 0 else mp.inf
            polished.append((w, rad))

        polished.sort(key=lambda t: (mp.re(t[0]), mp.im(t[0])))
        for i in range(len(polished)):
            for j in range(i + 1, len(polished)):
                if abs(polished[i][0] - polished[j][0]) <= polished[i][1] + polished[j][1]:
                    raise PrecisionExhaustedError(
                        f"roots {i} and {j} not separated at {precision} bits"
                    )

        partners = _pair_conjugates(polished)
        return [
            CertifiedRoot(value=w, error_radius=rad, conjugate_partner=partners[i])
            for i, (w, rad) in enumerate(polished)
        ]


def _pair_conjugates(polished) -> list:
    partners = [-1] * len(polished)
    for i, (w, rad) in enumerate(polished):
        if abs(mp.im(w)) <= rad:
            partners[i] = i
            continue
        best, best_d = None, None
        for j, (v, rv) in enumerate(polished):
            if j == i:
                continue
            d = abs(mp.conj(w) - v)
            if best_d is None or d < best_d:
                best, best_d = j, d
        if best is None or best_d > 2 * (rad + polished[best][1]):
            raise PrecisionExhaustedError("conjugate pairing failed")
        partners[i] = best
    return partners


# ---------------------------------------------------------------------------
# companion matrix and exact characteristic polynomial


def companion_matrix(f) -> tuple:
    """Multiplication by the class of x on the power basis 1, x, ..., x^(n-1)
    of Q[x]/f, for monic f: columns e_(k+1) and last column -coefficients.
    Exact rational entries; integral iff f is monic integral."""
    f = as_rat(f).monic()
    n = f.degree
    if n < 1:
        raise InvalidInputError("need degree >= 1")
    c = [[Fraction(0)] * n for _ in range(n)]
    for k in range(n - 1):
        c[k + 1][k] = Fraction(1)
    for i in range(n):
        c[i][n - 1] = -f.coeffs[i]
    return tuple(tuple(row) for row in c)


def char_poly_exact(m) -> RatPolynomial:
    """Characteristic polynomial det(xI - M) by the Faddeev-LeVerrier
    recurrence in exact rational arithmetic."""
    n = len(m)
    a = [[Fraction(x) for x in row] for row in m]
    coeffs = [Fraction(1)]  # of x^n, then descending
    mk = [[Fraction(0)] * n for _ in range(n)]
    for k in range(1, n + 1):
        # M_k = A * (M_{k-1} + c_{k-1} I)
        for i in range(n):
            mk[i][i] += coeffs[-1]
        mk = [
            [sum(a[i][t] * mk[t][j] for t in range(n)) for j in range(n)]
            for i in range(n)
        ]
        ck = -sum(mk[i][i] for i in range(n)) / k
        coeffs.append(ck)
    return RatPolynomial(list(reversed(coeffs)))


# ---------------------------------------------------------------------------
# period lattices


@dataclass(frozen=True)
class PeriodLattice:
    """Numerical lattice data for the torus attached to f.

    S holds the lattice basis in interleaved real coordinates (column k is
    the k-th power map at the chosen roots), J the complex structure in
    lattice coordinates, companion the exact matrix of multiplication by
    the class of x.  monic_scale records the leading coefficient divided
    out of f; rescaling the lattice by a scalar is an isogeny-neutral
    change.
    """

    g: int
    f: RatPolynomial
    roots_upper: tuple
    S: tuple
    J: tuple
    companion: tuple
    precision: int
    embedding_bitmask: int
    monic_scale: Fraction
    condition_number: object
    seed: int

    def invariant_residuals(self):
        """(||J^2 + I||_inf, ||J C - C J||_inf) at this precision."""
        with mp.workprec(self.precision + 64):
            n = 2 * self.g
            j = [list(row) for row in self.J]
            jj = mat_mul(j, j)
            for i in range(n):
                jj[i][i] += 1
            r1 = max_abs_entry(jj)
            c = [[mp.mpf(x.numerator) / x.denominator for x in row] for row in self.companion]
            r2 = max_abs_entry(mat_sub(mat_mul(j, c), mat_mul(c, j)))
            return r1, r2

    def to_json_dict(self) -> dict:
        from .canon import mpf_to_hex, rat_str

        return {
            "schema": "torus-forge/1",
            "kind": "PeriodLattice",
            "g": self.g,
            "polynomial": [rat_str(c) for c in self.f.coeffs],
            "precision": self.precision,
            "embedding_bitmask": self.embedding_bitmask,
            "monic_scale": rat_str(self.monic_scale),
            "roots_upper": [
                {
                    "re": mpf_to_hex(r.value.real),
                    "im": mpf_to_hex(r.value.imag),
                    "error_radius": mpf_to_hex(r.error_radius),
                }
                for r in self.roots_upper
            ],
            "S": [[mpf_to_hex(x) for x in row] for row in self.S],
            "J": [[mpf_to_hex(x) for x in row] for row in self.J],
            "companion": [[rat_str(x) for x in row] for row in self.companion],
        }


def build_period_lattice(
    f,
    precision: int = 256,
    *,
    embedding_bitmask: int = 0,
    seed: int = 0,
    max_precision: int = 4096,
) -> PeriodLattice:
    """Construct the period lattice of f at the requested precision.

    f must have even degree 2g and no real roots (checked exactly by Sturm
    count; irreducibility is the caller's contract).  The g roots in the
    upper half plane, ordered by (Re, Im), define the default embedding;
    bit j of embedding_bitmask swaps root j for its complex conjugate (any
    of the 2^g choices yields a valid complex structure).

    The construction doubles its working precision until both residuals
    ||J^2 + I|| and ||J C - C J|| fall below 2^(-precision/2), up to
    max_precision.
    """
    f = as_rat(f)
    if f.degree < 2 or f.degree % 2:
        raise InvalidInputError("need even degree >= 2")
    g = f.degree // 2
    if embedding_bitmask < 0 or embedding_bitmask >= (1 << g):
        raise InvalidInputError("embedding bitmask out of range")
    monic_scale = f.lc
    monic = f.monic()
    if sturm_count(monic) != 0:
        raise DependencyError("polynomial has real roots; no purely imaginary embedding")

    comp = companion_matrix(monic)
    tol_exp = precision // 2
    prec = precision
    while True:
        try:
            lattice = _build_at(monic, f, g, prec, precision, embedding_bitmask, seed, comp, monic_scale)
        except PrecisionExhaustedError:
            lattice = None
        if lattice is not None:
            r1, r2 = lattice.invariant_residuals()
            with mp.workprec(precision + 64):
                if r1 < mp.mpf(2) ** (-tol_exp) and r2 < mp.mpf(2) ** (-tol_exp):
                    return lattice
        prec *= 2
        if prec > max_precision:
            raise PrecisionExhaustedError(
                f"invariants not met below {max_precision} bits"
            )


def _build_at(monic, f, g, prec, declared_precision, bitmask, seed, comp, monic_scale):
    roots = complex_roots(monic, prec, seed=seed)
    upper = [r for r in roots if mp.im(r.value) > r.error_radius]
    if len(upper) != g:
        # exact Sturm check has already excluded real roots, so this is a
        # numerical separation failure; let the ladder raise precision
        raise PrecisionExhaustedError("could not select g upper-half-plane roots")
    upper.sort(key=lambda r: (mp.re(r.value), mp.im(r.value)))

    n = 2 * g
    with mp.workprec(2 * prec + 64):
        # conjugation must stay inside a wide-precision context, otherwise
        # the swapped roots are silently rounded to the ambient precision
        chosen = []
        for j, r in enumerate(upper):
            if bitmask >> j & 1:
                chosen.append(CertifiedRoot(mp.conj(r.value), r.error_radius, r.conjugate_partner))
            else:
                chosen.append(r)
    with mp.workprec(prec + 64):
        s = [[mp.mpf(0)] * n for _ in range(n)]
        for k in range(n):
            for j, r in enumerate(chosen):
                v = r.value**k
                s[2 * j][k] = mp.re(v)
                s[2 * j + 1][k] = mp.im(v)
        try:
            sinv = mat_inverse(s)
        except ZeroDivisionError:
            raise PrecisionExhaustedError("basis matrix numerically singular")
        j0 = block_diag_i(g)
        jmat = mat_mul(sinv, mat_mul(j0, s))
        cond = mat_inf_norm(s) * mat_inf_norm(sinv)

    return PeriodLattice(
        g=g,
        f=f,
        roots_upper=tuple(upper),
        S=tuple(tuple(row) for row in s),
        J=tuple(tuple(row) for row in jmat),
        companion=comp,
        precision=declared_precision,
        embedding_bitmask=bitmask,
        monic_scale=Fraction(monic_scale),
        condition_number=cond,
        seed=seed,
    )

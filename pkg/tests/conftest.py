"""Shared test oracles, all independent of the library code paths they
check: a Descartes-bisection real-root counter, a trial-division finite
field factorizer, and an exhaustive short-vector search."""

from fractions import Fraction

import pytest

from torusforge.exactalg import as_rat, cauchy_root_bound, squarefree_part

# ---------------------------------------------------------------------------
# Descartes / Vincent bisection root counting (integer coefficient lists,
# ascending order)


def _variations(coeffs):
    nz = [c for c in coeffs if c]
    return sum(1 for a, b in zip(nz, nz[1:]) if (a > 0) != (b > 0))


def _taylor_shift_1(coeffs):
    """p(x+1) by repeated synthetic addition."""
    out = list(coeffs)
    n = len(out)
    for i in range(1, n):
        for j in range(n - 1 - i, n - 1):
            out[j] += out[j + 1]
    return out


def _reverse(coeffs):
    out = list(coeffs)
    while out and out[-1] == 0:
        out.pop()
    return list(reversed(out))


def _eval_at_half(coeffs):
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * Fraction(1, 2) + c
    return acc


def _count_01(coeffs):
    """Distinct real roots in the open interval (0,1) of a squarefree
    integer polynomial, by Descartes' rule on the Moebius transform and
    bisection."""
    v = _variations(_taylor_shift_1(_reverse(coeffs)))
    if v == 0:
        return 0
    if v == 1:
        return 1
    n = len(coeffs) - 1
    left = [c * 2 ** (n - i) for i, c in enumerate(coeffs)]  # p(x/2) cleared
    right = _taylor_shift_1([c for c in left])  # p((x+1)/2) cleared
    mid = 1 if _eval_at_half(coeffs) == 0 else 0
    return _count_01(left) + mid + _count_01(right)


def descartes_real_root_count(f) -> int:
    """Distinct real roots of f over the whole line; independent of the
    Sturm machinery (only gcd/squarefree-part are shared plumbing)."""
    f = squarefree_part(as_rat(f))
    if f.degree <= 0:
        return 0
    ints = list(f.primitive().coeffs)
    bound = int(cauchy_root_bound(f)) + 1
    at_zero = 1 if ints[0] == 0 else 0
    n = len(ints) - 1
    pos = _count_01([c * bound**i for i, c in enumerate(ints)])  # roots in (0, bound)
    neg_poly = [c * (-1) ** i for i, c in enumerate(ints)]
    neg = _count_01([c * bound**i for i, c in enumerate(neg_poly)])
    extra = (1 if _eval_rat(ints, bound) == 0 else 0) + (1 if _eval_rat(neg_poly, bound) == 0 else 0)
    return pos + neg + at_zero + extra


def _eval_rat(ints, x):
    acc = 0
    for c in reversed(ints):
        acc = acc * x + c
    return acc


# ---------------------------------------------------------------------------
# naive finite-field factorization (trial division, smallest degree first)


def _gf_trim(f):
    while f and f[-1] == 0:
        f.pop()
    return f


def _gf_divmod(f, g, p):
    f = f[:]
    q = [0] * max(0, len(f) - len(g) + 1)
    inv = pow(g[-1], -1, p)
    while len(f) >= len(g):
        c = f[-1] * inv % p
        k = len(f) - len(g)
        q[k] = c
        for i, gc in enumerate(g):
            f[k + i] = (f[k + i] - c * gc) % p
        f.pop()
    return _gf_trim(q), _gf_trim(f)


def naive_factor(coeffs, p):
    """Full factorization over F_p into monic irreducibles (as coefficient
    lists, with multiplicity) by exhaustive trial division, smallest degree
    first -- smallest-first guarantees every divisor found is irreducible."""
    f = _gf_trim([c % p for c in coeffs])
    assert f, "zero polynomial"
    inv = pow(f[-1], -1, p)
    f = [c * inv % p for c in f]
    factors = []
    d = 1
    while len(f) - 1 > 0:
        if 2 * d > len(f) - 1:
            factors.append(f)
            break
        found = False
        for idx in range(p**d):
            cand = []
            t = idx
            for _ in range(d):
                cand.append(t % p)
                t //= p
            cand.append(1)
            q, r = _gf_divmod(f, cand, p)
            if not r:
                factors.append(cand)
                f = q
                found = True
                break
        if not found:
            d += 1
    return factors


def naive_factor_degrees(coeffs, p):
    return sorted(len(fac) - 1 for fac in naive_factor(coeffs, p))


def naive_is_squarefree(coeffs, p):
    factors = [tuple(f) for f in naive_factor(coeffs, p)]
    return len(factors) == len(set(factors))


# ---------------------------------------------------------------------------
# exhaustive short-vector search in rank-2 lattices


def shortest_vector_sq_2d(b1, b2, box=25):
    best = None
    for a in range(-box, box + 1):
        for b in range(-box, box + 1):
            if a == 0 and b == 0:
                continue
            v = [a * x + b * y for x, y in zip(b1, b2)]
            norm = sum(x * x for x in v)
            if best is None or norm < best:
                best = norm
    return best


@pytest.fixture
def tmp_store(tmp_path, monkeypatch):
    path = tmp_path / "store"
    monkeypatch.setenv("TORUS_FORGE_STORE", str(path))
    return str(path)

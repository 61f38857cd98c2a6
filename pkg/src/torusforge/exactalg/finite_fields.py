"""Modular polynomial arithmetic, factor-degree patterns, and small
number-theoretic utilities (primality, CRT, primitive roots).

Polynomials over F_p are plain lists of ints in [0, p), ascending degree.
Only the multiset of irreducible factor degrees is ever computed; full
factors are never materialized.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from ..errors import BadPrimeError, InvalidInputError
from .polynomials import as_rat

# ---------------------------------------------------------------------------
# primes


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin (valid for all n < 3.3 * 10^24)."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def primes_from(start: int) -> Iterator[int]:
    n = max(2, start)
    while True:
        if is_prime(n):
            yield n
        n += 1


def next_prime(n: int) -> int:
    return next(primes_from(n + 1))


def factorize(n: int) -> dict:
    """Prime factorization by trial division (desk-scale inputs)."""
    if n == 0:
        raise InvalidInputError("factorize(0)")
    n = abs(n)
    out: dict = {}
    for p in (2, 3, 5):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    d = 7
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def divisors(n: int) -> list:
    fac = factorize(n)
    out = [1]
    for p, e in fac.items():
        out = [d * p**k for d in out for k in range(e + 1)]
    return sorted(out)


def euler_phi(m: int) -> int:
    phi = m
    for p in factorize(m):
        phi = phi // p * (p - 1)
    return phi


def crt(residues, moduli) -> int:
    """Least nonnegative x with x = r_i (mod m_i), pairwise coprime moduli."""
    x, m = 0, 1
    for r, mi in zip(residues, moduli):
        t = ((r - x) * pow(m, -1, mi)) % mi
        x += m * t
        m *= mi
    return x % m


def primitive_root_check(b: int, p: int) -> bool:
    """True iff b has multiplicative order p - 1 modulo the prime p."""
    if not is_prime(p):
        raise InvalidInputError(f"{p} is not prime")
    if b % p == 0:
        raise InvalidInputError("b is divisible by p")
    return all(pow(b, (p - 1) // q, p) != 1 for q in factorize(p - 1))


def least_primitive_root(p: int) -> int:
    for r in range(2, p):
        if primitive_root_check(r, p):
            return r
    raise InvalidInputError(f"no primitive root mod {p}")  # p = 2 handled by loop


# ---------------------------------------------------------------------------
# F_p[x] arithmetic (dense lists, ascending)


def _gf_trim(f: list) -> list:
    while f and f[-1] == 0:
        f.pop()
    return f


def _gf_rem(f: list, g: list, p: int) -> list:
    f = f[:]
    inv = pow(g[-1], -1, p)
    while len(f) >= len(g):
        c = f[-1] * inv % p
        if c:
            k = len(f) - len(g)
            for i, gc in enumerate(g):
                f[k + i] = (f[k + i] - c * gc) % p
        f.pop()
    return _gf_trim(f)


def _gf_gcd(f: list, g: list, p: int) -> list:
    while g:
        f, g = g, _gf_rem(f, g, p)
    if f:
        inv = pow(f[-1], -1, p)
        f = [c * inv % p for c in f]
    return f


def _gf_mulmod(a: list, b: list, mod: list, p: int) -> list:
    out = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _gf_rem(_gf_trim(out), mod, p)


def _gf_powmod_x(e: int, mod: list, p: int) -> list:
    """x^e mod (mod) by square and multiply."""
    result = [1]
    base = _gf_rem([0, 1], mod, p)
    while e:
        if e & 1:
            result = _gf_mulmod(result, base, mod, p)
        base = _gf_mulmod(base, base, mod, p)
        e >>= 1
    return result


def _reduce_mod_p(f, p: int) -> list:
    """Coefficients of f mod p; denominators are inverted (BadPrimeError if
    p divides a denominator or the leading coefficient)."""
    f = as_rat(f)
    out = []
    for c in f.coeffs:
        c = Fraction(c)
        if c.denominator % p == 0:
            raise BadPrimeError(f"denominator divisible by {p}")
        out.append(c.numerator * pow(c.denominator, -1, p) % p)
    if out and out[-1] == 0:
        raise BadPrimeError(f"{p} divides the leading coefficient")
    return out


@dataclass(frozen=True)
class FactorPattern:
    """Multiset of irreducible factor degrees of f mod p (when squarefree)."""

    prime: int
    degrees: tuple
    squarefree: bool


def factor_degree_pattern(f, p: int) -> FactorPattern:
    """Distinct-degree factorization pattern of f modulo p.

    Returns the sorted multiset of irreducible factor degrees when the
    reduction is squarefree (gcd with its derivative is constant); otherwise
    squarefree=False with no degrees.  Accepts integer polynomials or
    rational ones whose denominators are invertible mod p.
    """
    if not is_prime(p):
        raise InvalidInputError(f"{p} is not prime")
    v = _reduce_mod_p(f, p)
    if len(v) <= 1:
        raise InvalidInputError("constant polynomial")
    deriv = _gf_trim([i * c % p for i, c in enumerate(v)][1:])
    if not deriv or len(_gf_gcd(v[:], deriv, p)) != 1:
        return FactorPattern(prime=p, degrees=(), squarefree=False)
    inv = pow(v[-1], -1, p)
    v = [c * inv % p for c in v]
    degrees = []
    d = 0
    while len(v) - 1 > 0:
        d += 1
        if 2 * d > len(v) - 1:
            degrees.append(len(v) - 1)
            break
        h = _gf_powmod_x(p**d, v, p)  # x^(p^d) mod v
        h = h + [0] * max(0, 2 - len(h))
        h[1] = (h[1] - 1) % p
        g = _gf_gcd(v[:], _gf_trim(h), p)
        if len(g) > 1:
            degrees.extend([d] * ((len(g) - 1) // d))
            v = _gf_quot(v, g, p)
    return FactorPattern(prime=p, degrees=tuple(sorted(degrees)), squarefree=True)


def _gf_quot(f: list, g: list, p: int) -> list:
    q = [0] * (len(f) - len(g) + 1)
    f = f[:]
    inv = pow(g[-1], -1, p)
    while len(f) >= len(g):
        c = f[-1] * inv % p
        k = len(f) - len(g)
        q[k] = c
        if c:
            for i, gc in enumerate(g):
                f[k + i] = (f[k + i] - c * gc) % p
        f.pop()
    return _gf_trim(q)

"""Canonical JSON serialization and content addressing.

All contract outputs serialize integers and rationals as decimal strings
(JSON numbers would lose precision past 2^53) and reals as exact hex-float
strings; objects are dumped with sorted keys so equal values are
byte-identical.  Certificates are addressed by the SHA-256 of their
canonical form.
"""

from __future__ import annotations

import hashlib
import json
from fractions import Fraction

from mpmath import mp


def rat_str(x) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def rat_from_str(s: str) -> Fraction:
    return Fraction(s)


def mpf_to_hex(x) -> str:
    """Exact, precision-preserving representation sign*0xMANTISSApEXP."""
    if x == 0:
        return "0x0p0"
    # read the mantissa/exponent directly; calling mp.mpf(x) here would
    # silently round to the ambient context precision
    tup = x._mpf_ if hasattr(x, "_mpf_") else mp.mpf(str(x))._mpf_
    sign, man, exp, _ = tup
    return f"{'-' if sign else ''}0x{int(man):x}p{int(exp)}"


def hex_to_mpf(s: str):
    from mpmath.libmp import from_man_exp

    neg = s.startswith("-")
    if neg:
        s = s[1:]
    if s == "0x0p0":
        return mp.mpf(0)
    man_s, exp_s = s[2:].split("p")
    man = int(man_s, 16)
    # from_man_exp without a precision argument is exact, independent of
    # the ambient context precision
    return mp.make_mpf(from_man_exp(-man if neg else man, int(exp_s)))


def canonical_dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=True)


def content_hash(obj) -> str:
    return hashlib.sha256(canonical_dumps(obj).encode()).hexdigest()


def poly_hash(f) -> str:
    """Content address of a polynomial: hash of its coefficient array
    (decimal strings, ascending degree)."""
    from .exactalg import as_rat

    return content_hash([rat_str(c) for c in as_rat(f).coeffs])


def poly_to_json(f) -> list:
    from .exactalg import as_rat

    return [rat_str(c) for c in as_rat(f).coeffs]


def poly_from_json(arr):
    from .exactalg import RatPolynomial

    return RatPolynomial([Fraction(s) for s in arr])

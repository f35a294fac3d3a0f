"""Dense univariate polynomials over the rationals.

Polynomials are tuples of :class:`fractions.Fraction` coefficients in
ascending degree order. The zero polynomial is the empty tuple. Everything
here is exact; floating point only enters through :func:`evaluate` when the
caller passes a float or an mpmath number.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence

import mpmath

Poly = tuple  # tuple[Fraction, ...], ascending degree


def make(coeffs: Iterable) -> Poly:
    """Build a normalized polynomial from ascending coefficients."""
    return trim(tuple(Fraction(c) for c in coeffs))


def trim(p: Sequence[Fraction]) -> Poly:
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return tuple(p)


def degree(p: Poly) -> int:
    return len(p) - 1


def add(p: Poly, q: Poly) -> Poly:
    n = max(len(p), len(q))
    out = [Fraction(0)] * n
    for i, c in enumerate(p):
        out[i] += c
    for i, c in enumerate(q):
        out[i] += c
    return trim(out)


def scale(p: Poly, s) -> Poly:
    s = Fraction(s)
    return trim(c * s for c in p)


def sub(p: Poly, q: Poly) -> Poly:
    return add(p, scale(q, -1))


def mul(p: Poly, q: Poly) -> Poly:
    if not p or not q:
        return ()
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return trim(out)


def power(p: Poly, e: int) -> Poly:
    out: Poly = (Fraction(1),)
    for _ in range(e):
        out = mul(out, p)
    return out


def divmod_(p: Poly, q: Poly) -> tuple[Poly, Poly]:
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(p)
    quot = [Fraction(0)] * max(len(p) - len(q) + 1, 0)
    lead = q[-1]
    while len(r) >= len(q) and r:
        shift = len(r) - len(q)
        f = r[-1] / lead
        quot[shift] = f
        for i, c in enumerate(q):
            r[shift + i] -= f * c
        r = list(trim(r))
    return trim(quot), trim(r)


def monic(p: Poly) -> Poly:
    if not p:
        return p
    return scale(p, 1 / p[-1])


def gcd(p: Poly, q: Poly) -> Poly:
    """Monic greatest common divisor (Euclid over Q)."""
    while q:
        p, q = q, divmod_(p, q)[1]
    return monic(p)


def derivative(p: Poly) -> Poly:
    return trim(i * c for i, c in enumerate(p) if i)


def evaluate(p: Poly, x):
    """Horner evaluation; exact for Fraction/int ``x``.

    Coefficients are converted to the type of ``x`` for float and mpmath
    arguments so no accuracy is lost to mixed arithmetic.
    """
    if isinstance(x, float):
        coeffs = [float(c) for c in p]
    elif isinstance(x, (mpmath.mpf, mpmath.mpc)):
        coeffs = [mpmath.mpf(c.numerator) / c.denominator for c in p]
    else:
        coeffs = p
    acc = 0 * x
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def integer_coeffs(p: Poly) -> tuple:
    """Integer multiple of p (positive factor), ascending coefficients."""
    den = 1
    for c in p:
        den = den * c.denominator // math.gcd(den, c.denominator)
    return tuple(int(c * den) for c in p)


def int_sign(ic: tuple, x: Fraction) -> int:
    """Sign at rational x of the polynomial with integer coefficients ``ic``.

    Evaluates the homogenized form ``sum c_i a^i b^(n-i)`` for ``x = a/b``,
    which avoids a gcd per operation.
    """
    a, b = x.numerator, x.denominator
    acc = 0
    bpow = 1
    for c in reversed(ic):
        acc = acc * a + c * bpow
        bpow *= b
    return (acc > 0) - (acc < 0)


def sign_at(p: Poly, x) -> int:
    """Exact sign of p(x) for rational x."""
    return int_sign(integer_coeffs(p), Fraction(x))


def squarefree_part(p: Poly) -> Poly:
    g = gcd(p, derivative(p))
    return monic(divmod_(p, g)[0])


def squarefree_decomposition(p: Poly) -> list[tuple[Poly, int]]:
    """Yun's algorithm: ``p = lc * prod(f_i ** i)`` with each f_i squarefree.

    Returns ``[(f_i, i), ...]`` skipping constant factors.
    """
    if degree(p) < 1:
        return []
    out = []
    dp = derivative(p)
    a = gcd(p, dp)
    b = divmod_(p, a)[0]
    c = divmod_(dp, a)[0]
    d = sub(c, derivative(b))
    i = 1
    while degree(b) >= 1:
        a = gcd(b, d)
        if degree(a) >= 1:
            out.append((a, i))
        b = divmod_(b, a)[0]
        c = divmod_(d, a)[0]
        d = sub(c, derivative(b))
        i += 1
    return out


def sturm_sequence(p: Poly) -> list[tuple]:
    """Sturm sequence of p, each member as positive-multiple integer coefficients."""
    seq = [p, derivative(p)]
    while seq[-1]:
        r = divmod_(seq[-2], seq[-1])[1]
        if not r:
            break
        seq.append(scale(r, -1))
    return [integer_coeffs(f) for f in seq]


def sign_variations(seq: list[tuple], x: Fraction) -> int:
    """Sign changes of a Sturm sequence given as integer coefficient tuples."""
    signs = [s for s in (int_sign(f, x) for f in seq) if s]
    return sum(1 for u, v in zip(signs, signs[1:]) if u != v)


def positive_root_bound(p: Poly) -> Fraction:
    """Cauchy bound: every real root satisfies ``|x| < bound``."""
    lead = abs(p[-1])
    return 1 + max((abs(c) / lead for c in p[:-1]), default=Fraction(0))


def to_str(p: Poly, var: str = "x") -> str:
    if not p:
        return "0"
    parts = []
    for i in range(len(p) - 1, -1, -1):
        c = p[i]
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        if i == 0:
            body = str(mag)
        else:
            mono = var if i == 1 else f"{var}^{i}"
            body = mono if mag == 1 else f"{mag}*{mono}"
        parts.append((sign, body))
    first_sign, first_body = parts[0]
    out = ("-" if first_sign == "-" else "") + first_body
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out

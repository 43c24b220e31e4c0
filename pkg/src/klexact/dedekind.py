"""Exact Dedekind sums s(d, c).

Two routes: the definitional sawtooth sum (the oracle) and a fast
O(log c) evaluation through the classical reciprocity recursion.  Both
return exact rationals; 12*c*s(d, c) is always an integer.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

_ZERO = Fraction(0)


def sawtooth(x: Fraction | int) -> Fraction:
    """((x)) = x - floor(x) - 1/2 for non-integer x, and 0 on integers."""
    x = Fraction(x)
    if x.denominator == 1:
        return _ZERO
    return x - (x.numerator // x.denominator) - Fraction(1, 2)


def dedekind_def(d: int, c: int) -> Fraction:
    """s(d, c) = sum_{r mod c} ((r/c)) ((dr/c)), straight from the definition.

    The sawtooth at r/c with c not dividing r is (2(r mod c) - c) / (2c),
    so each product is an integer over 4c^2; the loop stays in integers
    and converts once at the end.
    """
    if c < 1:
        raise ValueError("c must be positive")
    total = 0
    for r in range(1, c):
        dr = (d * r) % c
        if dr:
            total += (2 * r - c) * (2 * dr - c)
    return Fraction(total, 4 * c * c)


def dedekind_fast(d: int, c: int) -> Fraction:
    """s(d, c) for gcd(d, c) = 1 via the reciprocity recursion.

    Uses s(h, k) = -s(k mod h, h) - 1/4 + (h^2 + k^2 + 1)/(12 h k) down to
    the closed form s(1, k) = (k - 1)(k - 2)/(12 k).
    """
    if c < 1:
        raise ValueError("c must be positive")
    d %= c
    if gcd(d, c) != 1:
        raise ValueError("dedekind_fast requires gcd(d, c) = 1")
    acc = _ZERO
    sign = 1
    h, k = d, c
    while h > 1:
        acc += sign * (Fraction(h * h + k * k + 1, 12 * h * k) - Fraction(1, 4))
        sign = -sign
        h, k = k % h, h
    if h == 1:
        acc += sign * Fraction((k - 1) * (k - 2), 12 * k)
    return acc

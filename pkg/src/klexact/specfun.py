"""Arbitrary-precision Bessel values and exact roots of unity.

The half-odd-integer Bessel functions needed by the exact series have
elementary closed forms; the I_{3/2} and J_{3/2} forms are rewritten as
cancellation-free power series for small arguments.  An independent
ascending-series oracle is provided so the closed forms can be checked
against a second route.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil, pi, sqrt
from typing import Union

import mpmath
from mpmath import mp

from klexact.arith import RationalPhase

_GUARD = 32

# below this the direct cosh z - sinh z / z form loses ~2 log2(1/z) bits
_SMALL_Z = 0.25

PhaseLike = Union[RationalPhase, Fraction, int, float, mpmath.mpf]


@dataclass(frozen=True, slots=True)
class BigReal:
    """A real value carrying its working precision and an absolute error bound."""

    value: mpmath.mpf
    precision_bits: int
    err: mpmath.mpf

    def __float__(self) -> float:
        return float(self.value)


def _wrap(value: mpmath.mpf, precision_bits: int, flops: int) -> BigReal:
    err = abs(value) * mp.ldexp(flops, -precision_bits)
    return BigReal(value, precision_bits, err)


def _as_mpf(z: PhaseLike) -> mpmath.mpf:
    if isinstance(z, Fraction):
        return mp.mpf(z.numerator) / z.denominator
    if isinstance(z, RationalPhase):
        f = z.as_fraction()
        return mp.mpf(f.numerator) / f.denominator
    return mp.mpf(z)


def auto_precision_bits(n: int) -> int:
    """Enough bits to resolve an integer of size exp(pi sqrt(2n/3)) to < 1/4."""
    if n < 1:
        return 64
    return ceil(pi * sqrt(2 * n / 3) / 0.6931471805599453) + 64


def bessel_I_half(z: PhaseLike, precision_bits: int = 53) -> BigReal:
    """I_{1/2}(z) = sqrt(2/(pi z)) sinh(z) for z > 0."""
    with mp.workprec(precision_bits + _GUARD):
        zz = _as_mpf(z)
        if zz <= 0:
            raise ValueError("argument must be positive")
        val = mp.sqrt(2 / (mp.pi * zz)) * mp.sinh(zz)
    return _wrap(val, precision_bits, 8)


def bessel_I_3half(z: PhaseLike, precision_bits: int = 53) -> BigReal:
    """I_{3/2}(z) = sqrt(2/(pi z)) (cosh z - sinh z / z) for z > 0.

    Near zero the parenthesis is evaluated by its power series
    sum_{k>=1} z^(2k) 2k/(2k+1)!, which has no cancellation.
    """
    with mp.workprec(precision_bits + _GUARD):
        zz = _as_mpf(z)
        if zz <= 0:
            raise ValueError("argument must be positive")
        if zz < _SMALL_Z:
            inner = _small_inner(zz, sign=1)
        else:
            inner = mp.cosh(zz) - mp.sinh(zz) / zz
        val = mp.sqrt(2 / (mp.pi * zz)) * inner
    return _wrap(val, precision_bits, 16)


def bessel_J_half(z: PhaseLike, precision_bits: int = 53) -> BigReal:
    """J_{1/2}(z) = sqrt(2/(pi z)) sin(z) for z > 0."""
    with mp.workprec(precision_bits + _GUARD):
        zz = _as_mpf(z)
        if zz <= 0:
            raise ValueError("argument must be positive")
        val = mp.sqrt(2 / (mp.pi * zz)) * mp.sin(zz)
    return _wrap(val, precision_bits, 8)


def bessel_J_3half(z: PhaseLike, precision_bits: int = 53) -> BigReal:
    """J_{3/2}(z) = sqrt(2/(pi z)) (sin z / z - cos z) for z > 0."""
    with mp.workprec(precision_bits + _GUARD):
        zz = _as_mpf(z)
        if zz <= 0:
            raise ValueError("argument must be positive")
        if zz < _SMALL_Z:
            inner = _small_inner(zz, sign=-1)
        else:
            inner = mp.sin(zz) / zz - mp.cos(zz)
        val = mp.sqrt(2 / (mp.pi * zz)) * inner
    return _wrap(val, precision_bits, 16)


def _small_inner(zz: mpmath.mpf, sign: int) -> mpmath.mpf:
    """sum_k (+-1)^(k+1) z^(2k) (2k)/(2k+1)! at ambient precision.

    sign=+1 gives cosh z - sinh z / z, sign=-1 gives sin z / z - cos z.
    Successive term ratio is z^2 / (2k(2k+3)), so every term is positive
    before the sign is applied and nothing cancels.
    """
    z2 = zz * zz
    term = z2 / 3  # k = 1: z^2 * 2/3!
    total = term
    k = 1
    while abs(term) > abs(total) * mp.eps:
        term = term * z2 / (2 * k * (2 * k + 3))
        k += 1
        total += term if (sign > 0 or k % 2 == 1) else -term
    return total


def bessel_series_oracle(
    kind: str, halves: int, z: PhaseLike, precision_bits: int, min_terms: int = 30
) -> BigReal:
    """Independent ascending series for I or J of order halves/2.

    kind is "I" or "J"; at least min_terms terms are summed and the loop
    continues until terms drop below the ambient epsilon.
    """
    if kind not in ("I", "J"):
        raise ValueError("kind must be 'I' or 'J'")
    if halves not in (1, 3):
        raise ValueError("order must be 1/2 or 3/2")
    nu = mp.mpf(halves) / 2
    with mp.workprec(precision_bits + 2 * _GUARD):
        zz = _as_mpf(z)
        if zz <= 0:
            raise ValueError("argument must be positive")
        half = zz / 2
        q = half * half
        if kind == "J":
            q = -q
        term = half**nu / mp.gamma(nu + 1)
        total = term
        k = 1
        while k < min_terms or abs(term) > abs(total) * mp.eps:
            term = term * q / (k * (k + nu))
            total += term
            k += 1
            if k > 10000:
                raise ArithmeticError("series failed to converge")
    return _wrap(total, precision_bits, 4 * max(k, 1))


def sinh_ratio_derivative(a: PhaseLike, y: PhaseLike, precision_bits: int = 53) -> BigReal:
    """d/dy of sinh(a sqrt(y)) / sqrt(y), straight from cosh and sinh.

    Equals (a / (2y)) sqrt(pi a sqrt(y) / 2) I_{3/2}(a sqrt(y)); kept as
    a second route so the I_{3/2} closed form can be checked against it.
    """
    with mp.workprec(precision_bits + _GUARD):
        aa = _as_mpf(a)
        yy = _as_mpf(y)
        if aa <= 0 or yy <= 0:
            raise ValueError("arguments must be positive")
        u = mp.sqrt(yy)
        val = (aa * mp.cosh(aa * u) / yy - mp.sinh(aa * u) / (yy * u)) / 2
    return _wrap(val, precision_bits, 16)


def e_of(x: PhaseLike, precision_bits: int = 53) -> mpmath.mpc:
    """The unit e(x) = exp(2 pi i x), exact on quarter phases.

    Accepts an exact phase (RationalPhase or Fraction) or a real number;
    the result is correct to within a couple of ulps at the requested
    precision.
    """
    with mp.workprec(precision_bits):
        if isinstance(x, RationalPhase):
            frac = x.as_fraction()
        elif isinstance(x, Fraction):
            frac = x % 1
        elif isinstance(x, int):
            return mp.mpc(1)
        else:
            return mp.expjpi(2 * mp.mpf(x))
        num, den = frac.numerator, frac.denominator
        if den == 1:
            return mp.mpc(1)
        if den == 2:
            return mp.mpc(-1)
        if den == 4:
            return mp.mpc(0, 1) if num == 1 else mp.mpc(0, -1)
        return mp.expjpi(mp.mpf(2 * num) / den)

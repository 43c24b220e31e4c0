"""Exact-formula series for p(n) and the rank statistics A(1/2; n), A(1/3; n).

Each evaluator sums Kloosterman-times-Bessel terms over an arithmetic
progression of moduli c up to a cutoff, carries a certified error
bound, and reports one of three verdicts:

  rounded       the value is provably within 1/4 of its nearest integer
  failed        the value is provably at least 1/4 from every integer
  indeterminate the error bars are too wide to decide either way

The root-of-unity prefactor is folded into the phase multiset exactly;
only Bessel factors and the final assembly are floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import ceil, floor, sqrt
from typing import Callable, NamedTuple

import mpmath
from mpmath import mp

from klexact.arith import RationalPhase
from klexact.multipliers import MultiplierKind, MultiplierSpec, make_spec
from klexact.oracles import A_ab, get_rank_table, pentagonal_p
from klexact.specfun import (
    BigReal,
    auto_precision_bits,
    bessel_I_3half,
    bessel_I_half,
)
from klexact.sums import generalized_S

_EIGHTH_DOWN = RationalPhase(-1, 8)
_WORK_GUARD = 32


class TermRecord(NamedTuple):
    c: int
    kloosterman: mpmath.mpc
    bessel: mpmath.mpf
    term: mpmath.mpc


@dataclass(slots=True)
class SeriesResult:
    value: BigReal
    cutoff_c: int
    term_records: list[TermRecord]
    rounded: int
    rounding_gap: BigReal
    verdict: str
    imag_abs: mpmath.mpf
    precision_bits: int

    @property
    def err_bound(self) -> mpmath.mpf:
        return self.value.err


def default_cutoff(j: int, n: int) -> int:
    """The desk-scale cutoff: 5 sqrt(n) for p(n), 10 sqrt(n) for ranks."""
    if j == 1:
        return max(1, ceil(5 * sqrt(n)))
    return max(1, ceil(10 * sqrt(n)))


def _series(
    n: int,
    cutoff: int,
    precision_bits: int | None,
    spec: MultiplierSpec,
    m_idx: int,
    n_idx: int,
    x_power: mpmath.mpf | float,
    bessel: Callable[..., BigReal],
) -> SeriesResult:
    if n < 1:
        raise ValueError("n must be positive")
    if cutoff < 1:
        raise ValueError("cutoff must be positive")
    bits = auto_precision_bits(n) if precision_bits is None else precision_bits
    if bits < 53:
        raise ValueError("precision_bits must be at least 53")
    wp = bits + _WORK_GUARD
    records: list[TermRecord] = []
    with mp.workprec(wp):
        x = mp.mpf(24 * n - 1)
        pref = 2 * mp.pi / x**x_power
        sqrt_x = mp.sqrt(x)
        total = mp.mpc(0)
        err = mp.mpf(0)
        for c in range(spec.level, cutoff + 1, spec.level):
            expsum = generalized_S(m_idx, n_idx, c, spec).shifted(_EIGHTH_DOWN)
            val, verr = expsum.evaluate(wp)
            bes = bessel(mp.pi * sqrt_x / (6 * c), wp)
            term = pref * val * bes.value / c
            total += term
            err += (pref / c) * (
                abs(val) * bes.err
                + bes.value * verr
                + mp.ldexp(8, -wp) * (abs(val) * bes.value + 1)
            )
            records.append(TermRecord(c, val, bes.value, term))
        err += mp.ldexp(len(records) + 8, -wp) * (abs(total) + 1)
        value_re = total.real
        imag_abs = abs(total.imag)
        nearest = int(mp.nint(value_re))
        gap = abs(value_re - nearest)
        quarter = mp.mpf(1) / 4
        if err >= quarter:
            verdict = "indeterminate"
        elif gap + err < quarter:
            verdict = "rounded"
        elif gap - err >= quarter:
            verdict = "failed"
        else:
            verdict = "indeterminate"
    return SeriesResult(
        value=BigReal(value_re, bits, err),
        cutoff_c=cutoff,
        term_records=records,
        rounded=nearest,
        rounding_gap=BigReal(gap, bits, err),
        verdict=verdict,
        imag_abs=imag_abs,
        precision_bits=bits,
    )


def rademacher_p(
    n: int, cutoff: int | None = None, precision_bits: int | None = None
) -> SeriesResult:
    """The partition series: 2 pi e(-1/8) / x^(3/4) times
    sum_c S(1, 1-n, c, nu_eta) I_{3/2}(pi sqrt(x) / (6c)) / c, x = 24n - 1.
    """
    if cutoff is None:
        cutoff = default_cutoff(1, n)
    return _series(
        n,
        cutoff,
        precision_bits,
        make_spec(MultiplierKind.ETA),
        1,
        1 - n,
        mp.mpf(3) / 4,
        bessel_I_3half,
    )


def andrews_dragonette(
    n: int, cutoff: int | None = None, precision_bits: int | None = None
) -> SeriesResult:
    """The A(1/2; n) series over even c with the weight-1/2 eta-theta
    multiplier: 2 pi e(-1/8) / x^(1/4) times
    sum_{2|c} S(0, n, c, psi) I_{1/2}(pi sqrt(x) / (6c)) / c.
    """
    if cutoff is None:
        cutoff = default_cutoff(2, n)
    return _series(
        n,
        cutoff,
        precision_bits,
        make_spec(MultiplierKind.PSI),
        0,
        n,
        mp.mpf(1) / 4,
        bessel_I_half,
    )


def rank_mod3_exact(
    n: int, cutoff: int | None = None, precision_bits: int | None = None
) -> SeriesResult:
    """The A(1/3; n) series over c divisible by 3 with the cubic-twisted
    conjugate eta multiplier, same shape as the A(1/2; n) series.
    """
    if cutoff is None:
        cutoff = default_cutoff(3, n)
    return _series(
        n,
        cutoff,
        precision_bits,
        make_spec(MultiplierKind.THIRD_TWIST_ETA_BAR),
        0,
        n,
        mp.mpf(1) / 4,
        bessel_I_half,
    )


_ORACLES: dict[int, Callable[[int], int]] = {
    1: pentagonal_p,
    2: lambda n: A_ab(1, 2, n, get_rank_table(n)),
    3: lambda n: A_ab(1, 3, n, get_rank_table(n)),
}

_SERIES_FNS = {
    1: rademacher_p,
    2: andrews_dragonette,
    3: rank_mod3_exact,
}


def tail_R(j: int, n: int, x: float, precision_bits: int | None = None) -> BigReal:
    """The tail of series j past the moduli <= x: exact value minus the
    partial sum.  j = 1 is the partition series, j = 2 and j = 3 the two
    rank series.
    """
    if j not in (1, 2, 3):
        raise ValueError("series index must be 1, 2 or 3")
    if n < 1:
        raise ValueError("n must be positive")
    if x < 1:
        raise ValueError("cutoff bound must be at least 1")
    exact = _ORACLES[j](n)
    partial = _SERIES_FNS[j](n, cutoff=floor(x), precision_bits=precision_bits)
    bits = partial.precision_bits
    with mp.workprec(bits + _WORK_GUARD):
        value = mp.mpf(exact) - partial.value.value
    return BigReal(value, bits, partial.value.err)

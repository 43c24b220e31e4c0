"""Generalized Kloosterman sums as exact phase multisets.

A sum S(m, n, c, nu) = sum over gamma of conj(nu)(gamma) e((m~ a + n~ d)/c)
is built as an ExpSum: a multiset mapping exact phases to integer
weights.  Identities between sums are tested as multiset equality, with
numeric evaluation deferred to an explicit precision request.  Also
provides the standard sum S(m, n, c) and the classical A_c(n).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import NamedTuple

import mpmath
from mpmath import mp

from klexact import kernel
from klexact.arith import RationalPhase, mod_inverse
from klexact.dedekind import dedekind_fast
from klexact.multipliers import (
    GammaMatrix,
    MultiplierKind,
    MultiplierSpec,
    bar_spec,
    eval_multiplier,
    make_quad_twist,
    make_spec,
)
from klexact.specfun import e_of


@dataclass(frozen=True, slots=True)
class TildeIndex:
    """A Fourier index n shifted by the multiplier's alpha: tilde = n - alpha."""

    n: int
    alpha: Fraction
    tilde: Fraction

    @classmethod
    def make(cls, n: int, alpha: Fraction) -> TildeIndex:
        return cls(n, alpha, n - alpha)


class EvalResult(NamedTuple):
    value: mpmath.mpc
    err: mpmath.mpf


@dataclass(slots=True)
class ExpSum:
    """A finite sum of roots of unity: exact phase -> integer weight.

    metadata (multiplier, m, n, c) records where the sum came from; term
    comparisons in identity tests go through .terms directly.
    """

    terms: dict[RationalPhase, int]
    multiplier: str
    m: int
    n: int
    c: int

    @property
    def nterms(self) -> int:
        return sum(abs(w) for w in self.terms.values())

    def conjugate(self) -> ExpSum:
        return ExpSum(
            {-ph: w for ph, w in self.terms.items()},
            self.multiplier,
            self.m,
            self.n,
            self.c,
        )

    def shifted(self, phase: RationalPhase) -> ExpSum:
        """Multiply the whole sum by the unit e(phase), exactly."""
        return ExpSum(
            {ph + phase: w for ph, w in self.terms.items()},
            self.multiplier,
            self.m,
            self.n,
            self.c,
        )

    def evaluate(self, precision_bits: int) -> EvalResult:
        return evaluate(self, precision_bits)


def evaluate(expsum: ExpSum, precision_bits: int) -> EvalResult:
    """Numeric value with certified error bound nterms * 2^(1-p).

    Terms are summed in ascending phase order so results are
    deterministic across runs.
    """
    if precision_bits < 53:
        raise ValueError("precision_bits must be at least 53")
    with mp.workprec(precision_bits + 10):
        total = mp.mpc(0)
        for phase, w in sorted(
            expsum.terms.items(), key=lambda kv: kv[0].as_fraction()
        ):
            total += w * e_of(phase, precision_bits + 10)
        err = mp.mpf(expsum.nterms) * mp.ldexp(1, 1 - precision_bits)
        return EvalResult(total, err)


def enumerate_gamma(c: int, N: int) -> list[GammaMatrix]:
    """Coset representatives (a, b; c, d), one per unit d mod c.

    a is the inverse of d mod c in [0, c) and b = (ad - 1)/c, giving
    exactly phi(c) matrices of determinant 1 in Gamma_0(N).
    """
    if c < 1:
        raise ValueError("c must be positive")
    if c % N:
        raise ValueError(f"level {N} does not divide c = {c}")
    out = []
    for d in range(c):
        if gcd(d, c) != 1:
            continue
        a = mod_inverse(d, c)
        out.append(GammaMatrix(a, (a * d - 1) // c, c, d))
    return out


@lru_cache(maxsize=None)
def _multiplier_rows(
    spec: MultiplierSpec, c: int
) -> tuple[tuple[RationalPhase, int, int], ...]:
    """(phase of nu(gamma), a, d) for each enumerated gamma at modulus c."""
    return tuple(
        (eval_multiplier(spec, g), g.a, g.d)
        for g in enumerate_gamma(c, spec.level)
    )


def generalized_S(m: int, n: int, c: int, spec: MultiplierSpec) -> ExpSum:
    """S(m, n, c, nu) as an exact phase multiset.

    Each enumerated gamma contributes conj(nu)(gamma) e((m~ a + n~ d)/c)
    with m~ = m - alpha and n~ = n - alpha.
    """
    tm = TildeIndex.make(m, spec.alpha)
    tn = TildeIndex.make(n, spec.alpha)
    terms: dict[RationalPhase, int] = {}
    if spec.alpha.denominator in (1, 24):
        # fast integer path: phases have denominator dividing 24c
        a24 = int(24 * spec.alpha)
        mm, nn = 24 * m - a24, 24 * n - a24
        for nu_phase, a, d in _multiplier_rows(spec, c):
            ph = RationalPhase(
                (mm * a + nn * d) * nu_phase.den - nu_phase.num * 24 * c,
                24 * c * nu_phase.den,
            )
            terms[ph] = terms.get(ph, 0) + 1
    else:
        for nu_phase, a, d in _multiplier_rows(spec, c):
            expo = (tm.tilde * a + tn.tilde * d) / c
            ph = RationalPhase.from_fraction(expo) - nu_phase
            terms[ph] = terms.get(ph, 0) + 1
    return ExpSum(terms, spec.ident, m, n, c)


def standard_S(m: int, n: int, c: int) -> ExpSum:
    """The standard Kloosterman sum over units d mod c, exactly."""
    if c < 1:
        raise ValueError("c must be positive")
    terms: dict[RationalPhase, int] = {}
    for d in range(c):
        if gcd(d, c) != 1:
            continue
        ph = RationalPhase(m * mod_inverse(d, c) + n * d, c)
        terms[ph] = terms.get(ph, 0) + 1
    return ExpSum(terms, "standard", m, n, c)


def classic_A(c: int, n: int) -> ExpSum:
    """A_c(n) = sum over units d of e^(pi i s(d,c)) e(-dn/c), exactly.

    e^(pi i s) is a rational phase s/2 since 12c s(d, c) is an integer.
    """
    if c < 1:
        raise ValueError("c must be positive")
    terms: dict[RationalPhase, int] = {}
    for d in range(c):
        if gcd(d, c) != 1:
            continue
        ph = RationalPhase.from_fraction(
            dedekind_fast(d, c) / 2 - Fraction(d * n, c)
        )
        terms[ph] = terms.get(ph, 0) + 1
    return ExpSum(terms, "classic_a", 0, n, c)


_KERNEL_KINDS = {
    MultiplierKind.ETA: "eta",
    MultiplierKind.ETA_BAR: "eta_bar",
    MultiplierKind.THETA: "theta",
    MultiplierKind.THETA_BAR: "theta_bar",
    MultiplierKind.PSI: "psi",
    MultiplierKind.THIRD_TWIST_ETA_BAR: "third_twist_eta_bar",
}


def kernel_S(m: int, n: int, c: int, spec: MultiplierSpec) -> complex:
    """Double-precision S(m, n, c, nu) through the selected kernel.

    The fast numeric twin of generalized_S for the large bound-lab and
    partial-sum scans; cross-checked against the exact route in tests.
    """
    if spec.conjugated:
        raise NotImplementedError("kernel route covers unconjugated multipliers")
    if spec.kind is MultiplierKind.QUAD_TWIST:
        return kernel.sum_eval(
            _KERNEL_KINDS[spec.twist_base], m, n, c, spec.twist_disc
        )
    return kernel.sum_eval(_KERNEL_KINDS[spec.kind], m, n, c, 0)


def spec_from_ident(ident: str) -> MultiplierSpec:
    """Inverse of MultiplierSpec.ident, also accepting CLI names."""
    name = ident
    conj = name.endswith("_conj")
    if conj:
        name = name[: -len("_conj")]
    if name.startswith("quad_twist(") and name.endswith(")"):
        disc_str, base = name[len("quad_twist(") : -1].split(",")
        spec = make_quad_twist(MultiplierKind(base), int(disc_str))
    else:
        spec = make_spec(MultiplierKind(name))
    return bar_spec(spec) if conj else spec


def recompute_terms(key: tuple[str, int, int, int]) -> dict[RationalPhase, int] | None:
    """Rebuild the phase multiset for a cache key; None if not rebuildable."""
    ident, m, n, c = key
    if ident == "standard":
        return standard_S(m, n, c).terms
    if ident == "classic_a":
        return classic_A(c, n).terms
    try:
        spec = spec_from_ident(ident)
    except (ValueError, KeyError):
        return None
    return generalized_S(m, n, c, spec).terms

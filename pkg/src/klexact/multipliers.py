"""Multiplier systems of weight +-1/2, evaluated as exact phases.

Implements the eta multiplier (Dedekind-sum form and the Knopp
closed form), the theta multiplier on level 4, the psi multiplier on
level 2, the (d/3)-twisted conjugate eta multiplier on level 3, and
quadratic-character twists of any of them.  All values are RationalPhase
elements, so identities between multipliers can be tested exactly.
Also provides the weight-k consistency factor w_k(g1, g2).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace
from fractions import Fraction
from math import atan2, lcm, pi

from klexact.arith import (
    HALF_PHASE,
    ZERO_PHASE,
    RationalPhase,
    epsilon_d,
    kronecker,
)
from klexact.dedekind import dedekind_fast


@dataclass(frozen=True, slots=True)
class GammaMatrix:
    """An integer matrix (a, b; c, d) with determinant 1."""

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self) -> None:
        if self.a * self.d - self.b * self.c != 1:
            raise ValueError("determinant must be 1")

    def __matmul__(self, other: GammaMatrix) -> GammaMatrix:
        return GammaMatrix(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def __neg__(self) -> GammaMatrix:
        return GammaMatrix(-self.a, -self.b, -self.c, -self.d)


T_MAT = GammaMatrix(1, 1, 0, 1)
S_MAT = GammaMatrix(0, -1, 1, 0)
I_MAT = GammaMatrix(1, 0, 0, 1)


class MultiplierKind(enum.Enum):
    ETA = "eta"
    ETA_BAR = "eta_bar"
    THETA = "theta"
    THETA_BAR = "theta_bar"
    PSI = "psi"
    THIRD_TWIST_ETA_BAR = "third_twist_eta_bar"
    QUAD_TWIST = "quad_twist"


@dataclass(frozen=True, slots=True)
class MultiplierSpec:
    """A named multiplier with its weight, level, and translation phase alpha.

    alpha is the rational in [0, 1) with e(-alpha) = nu(T).  QUAD_TWIST
    carries the base kind plus the Kronecker discriminant of the twisting
    character chi(d) = kronecker(twist_disc, d); a negative discriminant
    gives an odd character and flips the weight sign.
    """

    kind: MultiplierKind
    weight: Fraction
    level: int
    alpha: Fraction
    twist_base: MultiplierKind | None = None
    twist_disc: int = 0
    conjugated: bool = False

    @property
    def ident(self) -> str:
        if self.kind is MultiplierKind.QUAD_TWIST:
            base = f"quad_twist({self.twist_disc},{self.twist_base.value})"
        else:
            base = self.kind.value
        return base + "_conj" if self.conjugated else base


_BASE_TABLE = {
    MultiplierKind.ETA: (Fraction(1, 2), 1, Fraction(23, 24)),
    MultiplierKind.ETA_BAR: (Fraction(-1, 2), 1, Fraction(1, 24)),
    MultiplierKind.THETA: (Fraction(1, 2), 4, Fraction(0)),
    MultiplierKind.THETA_BAR: (Fraction(-1, 2), 4, Fraction(0)),
    MultiplierKind.PSI: (Fraction(1, 2), 2, Fraction(1, 24)),
    MultiplierKind.THIRD_TWIST_ETA_BAR: (Fraction(1, 2), 3, Fraction(1, 24)),
}


def make_spec(kind: MultiplierKind) -> MultiplierSpec:
    """Spec for one of the six fixed multipliers (see make_quad_twist)."""
    weight, level, alpha = _BASE_TABLE[kind]
    return MultiplierSpec(kind, weight, level, alpha)


def make_quad_twist(base: MultiplierKind, disc: int) -> MultiplierSpec:
    """Twist a base multiplier by the character chi(d) = kronecker(disc, d).

    The character modulus is |disc| for disc = 1 mod 4 and 4|disc|
    otherwise; the spec's level is the lcm of it with the base level, so
    the modulus always divides the level.  chi(-1) = sign(disc), hence
    the weight flips for negative discriminants.
    """
    if disc == 0 or disc == 1:
        raise ValueError("twist discriminant must be a nontrivial integer")
    weight, level, alpha = _BASE_TABLE[base]
    modulus = abs(disc) if disc % 4 == 1 else 4 * abs(disc)
    return MultiplierSpec(
        MultiplierKind.QUAD_TWIST,
        weight if disc > 0 else -weight,
        lcm(level, modulus),
        alpha,
        twist_base=base,
        twist_disc=disc,
    )


ALL_FIXED_KINDS = tuple(_BASE_TABLE)


def eval_eta_rademacher(g: GammaMatrix) -> RationalPhase:
    """Eta multiplier phase via the Dedekind-sum form.

    For c > 0 this is e(-1/8) e^{-pi i s(d,c)} e((a+d)/(24c)); c = 0 uses
    the translation rule nu(T^b) = e(b/24), and c < 0 reduces to -g
    through nu(-g') = i nu(g') for g' with positive c.
    """
    a, b, c, d = g.a, g.b, g.c, g.d
    if c == 0:
        if d == 1:
            return RationalPhase(b, 24)
        # g = -T^{-b}: phase of nu(-I . T^{-b}) = 3/4 - b/24
        return RationalPhase(18 - b, 24)
    if c < 0:
        return RationalPhase(1, 4) + eval_eta_rademacher(-g)
    s = dedekind_fast(d, c)
    phase = Fraction(-1, 8) - s / 2 + Fraction(a + d, 24 * c)
    return RationalPhase.from_fraction(phase)


def eval_eta_knopp(g: GammaMatrix) -> RationalPhase:
    """Eta multiplier phase via the Knopp closed form, valid for c > 0 only."""
    a, b, c, d = g.a, g.b, g.c, g.d
    if c <= 0:
        raise ValueError("the closed form requires c > 0")
    if c % 2:
        sign = kronecker(d, c)
        num = (a + d) * c - b * d * (c * c - 1) - 3 * c
    else:
        sign = kronecker(c, d)
        num = (a + d) * c - b * d * (c * c - 1) + 3 * d - 3 - 3 * c * d
    phase = RationalPhase(num, 24)
    if sign == -1:
        phase = phase + HALF_PHASE
    return phase


def eval_theta(g: GammaMatrix) -> RationalPhase:
    """Theta multiplier (c/d) epsilon_d^{-1} on level 4."""
    if g.c % 4:
        raise ValueError("theta multiplier requires 4 | c")
    phase = -epsilon_d(g.d)
    if kronecker(g.c, g.d) == -1:
        phase = phase + HALF_PHASE
    return phase


def eval_psi(g: GammaMatrix) -> RationalPhase:
    """psi = e(c/8) (-1/d)^(c/2+1) conj(eta), the level-2 multiplier."""
    if g.c % 2:
        raise ValueError("psi requires 2 | c")
    phase = RationalPhase(g.c, 8) - eval_eta_rademacher(g)
    if kronecker(-1, g.d) == -1 and (g.c // 2 + 1) % 2:
        phase = phase + HALF_PHASE
    return phase


def eval_multiplier(spec: MultiplierSpec, g: GammaMatrix) -> RationalPhase:
    """Evaluate any implemented multiplier as an exact phase."""
    if g.c % spec.level:
        raise ValueError(f"matrix is not in Gamma_0({spec.level})")
    if spec.conjugated:
        return -eval_multiplier(replace(spec, conjugated=False), g)
    kind = spec.kind
    if kind is MultiplierKind.ETA:
        return eval_eta_rademacher(g)
    if kind is MultiplierKind.ETA_BAR:
        return -eval_eta_rademacher(g)
    if kind is MultiplierKind.THETA:
        return eval_theta(g)
    if kind is MultiplierKind.THETA_BAR:
        return -eval_theta(g)
    if kind is MultiplierKind.PSI:
        return eval_psi(g)
    if kind is MultiplierKind.THIRD_TWIST_ETA_BAR:
        phase = -eval_eta_rademacher(g)
        if kronecker(g.d, 3) == -1:
            phase = phase + HALF_PHASE
        return phase
    if kind is MultiplierKind.QUAD_TWIST:
        # base level divides the twisted level, so the check above suffices
        phase = eval_multiplier(make_spec(spec.twist_base), g)
        if kronecker(spec.twist_disc, g.d) == -1:
            phase = phase + HALF_PHASE
        return phase
    raise ValueError(f"unknown multiplier kind {kind}")


_CONJ_PAIRS = {
    MultiplierKind.ETA: MultiplierKind.ETA_BAR,
    MultiplierKind.ETA_BAR: MultiplierKind.ETA,
    MultiplierKind.THETA: MultiplierKind.THETA_BAR,
    MultiplierKind.THETA_BAR: MultiplierKind.THETA,
}


def bar_spec(spec: MultiplierSpec) -> MultiplierSpec:
    """The complex-conjugate multiplier nu-bar.

    Named conjugate kinds are used where they exist; psi and the twisted
    kinds flip a conjugation flag instead.  Weight negates and alpha
    reflects to (-alpha) mod 1 in either case.
    """
    if spec.conjugated:
        return replace(
            spec,
            weight=-spec.weight,
            alpha=(-spec.alpha) % 1,
            conjugated=False,
        )
    if spec.kind in _CONJ_PAIRS:
        return make_spec(_CONJ_PAIRS[spec.kind])
    if spec.kind is MultiplierKind.QUAD_TWIST and spec.twist_base in _CONJ_PAIRS:
        return make_quad_twist(_CONJ_PAIRS[spec.twist_base], spec.twist_disc)
    return replace(
        spec,
        weight=-spec.weight,
        alpha=(-spec.alpha) % 1,
        conjugated=True,
    )


def alpha_of(spec: MultiplierSpec) -> Fraction:
    """alpha in [0, 1) with e(-alpha) = nu(T), computed from the evaluator."""
    phase = eval_multiplier(spec, T_MAT)
    return (-phase).as_fraction()


def cocycle_w(g1: GammaMatrix, g2: GammaMatrix, k: Fraction) -> RationalPhase:
    """Consistency factor w_k(g1, g2) = j(g2,z)^k j(g1,g2 z)^k j(g1 g2,z)^{-k}.

    The three principal arguments at z = i differ from the argument of
    the product by an exact multiple of 2*pi; the factor is e(k*ell) for
    that integer ell.  Computed numerically and rounded, with the
    rounding gap checked against accumulated double error.
    """
    z = 1j
    j2 = g2.c * z + g2.d
    g2z = (g2.a * z + g2.b) / j2
    j1 = g1.c * g2z + g1.d
    g12 = g1 @ g2
    j12 = g12.c * z + g12.d
    delta = (
        atan2(j2.imag, j2.real)
        + atan2(j1.imag, j1.real)
        - atan2(j12.imag, j12.real)
    )
    t = delta / (2 * pi)
    ell = round(t)
    if abs(t - ell) > 1e-6:
        raise ArithmeticError(
            f"cocycle angle {t} is not safely close to an integer"
        )
    return RationalPhase.from_fraction(Fraction(k) * ell)

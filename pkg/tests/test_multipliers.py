"""Multiplier systems as exact phases: eta, theta, psi, twists, cocycle."""

import random
from fractions import Fraction
from math import gcd

import pytest

from klexact.arith import RationalPhase, mod_inverse
from klexact.multipliers import (
    ALL_FIXED_KINDS,
    GammaMatrix,
    I_MAT,
    MultiplierKind,
    S_MAT,
    T_MAT,
    alpha_of,
    bar_spec,
    cocycle_w,
    eval_eta_knopp,
    eval_eta_rademacher,
    eval_multiplier,
    eval_psi,
    eval_theta,
    make_quad_twist,
    make_spec,
)


def _gamma0_matrices(level: int, c_max: int, shifts=(0, 1, -2)):
    """All (a,b;c,d) with level | c <= c_max, d in [0,c) coprime, a varied."""
    out = []
    for c in range(level, c_max + 1, level):
        for d in range(c):
            if gcd(d, c) != 1:
                continue
            a0 = mod_inverse(d, c)
            for k in shifts:
                a = a0 + k * c
                out.append(GammaMatrix(a, (a * d - 1) // c, c, d))
    return out


# ------------------------------------------------------------------ eta


def test_eta_rademacher_examples():
    assert eval_eta_rademacher(T_MAT) == RationalPhase(1, 24)
    assert eval_eta_rademacher(S_MAT) == RationalPhase(7, 8)
    # s(1,1) = 0 and (a+d)/(24c) = 2/24: e(-1/8) e(1/12)
    assert eval_eta_rademacher(GammaMatrix(1, 0, 1, 1)) == RationalPhase(23, 24)


def test_eta_translation_powers():
    for b in range(-30, 31):
        g = GammaMatrix(1, b, 0, 1)
        assert eval_eta_rademacher(g) == RationalPhase(b, 24)


def test_eta_negative_c_and_minus_identity():
    # nu(-g) = i nu(g) for c > 0, and nu(-I) = e(3/4) = e^{-pi i/2}
    for g in _gamma0_matrices(1, 8):
        assert eval_eta_rademacher(-g) == RationalPhase(1, 4) + eval_eta_rademacher(g)
    assert eval_eta_rademacher(-I_MAT) == RationalPhase(3, 4)


def test_eta_knopp_examples():
    assert eval_eta_knopp(S_MAT) == RationalPhase(7, 8)
    g = GammaMatrix(1, 0, 2, 1)
    assert eval_eta_knopp(g) == eval_eta_rademacher(g)
    with pytest.raises(ValueError):
        eval_eta_knopp(T_MAT)  # c = 0 is outside the closed form


def test_eta_rademacher_equals_knopp():
    for g in _gamma0_matrices(1, 25):
        assert eval_eta_knopp(g) == eval_eta_rademacher(g)


# ---------------------------------------------------------------- theta


def test_theta_examples():
    assert eval_theta(GammaMatrix(1, 0, 4, 1)) == RationalPhase(0, 1)
    assert eval_theta(T_MAT) == RationalPhase(0, 1)
    # (8/3) = -1 and epsilon_3^{-1} = -i, so the value is i
    assert eval_theta(GammaMatrix(3, 1, 8, 3)) == RationalPhase(1, 4)


def test_theta_rejects_bad_level():
    with pytest.raises(ValueError):
        eval_theta(GammaMatrix(1, 0, 2, 1))


# ------------------------------------------------------------------ psi


def test_psi_examples():
    assert eval_psi(T_MAT) == RationalPhase(23, 24)
    g = GammaMatrix(1, 0, 2, 1)
    expected = RationalPhase(1, 4) - eval_eta_rademacher(g)  # (-1/1)^2 = 1
    assert eval_psi(g) == expected


def test_psi_rejects_odd_c():
    with pytest.raises(ValueError):
        eval_psi(GammaMatrix(1, 0, 1, 1))


# -------------------------------------------------------- eval_multiplier


def test_eval_multiplier_examples():
    third = make_spec(MultiplierKind.THIRD_TWIST_ETA_BAR)
    assert eval_multiplier(third, T_MAT) == RationalPhase(23, 24)
    eta_bar = make_spec(MultiplierKind.ETA_BAR)
    assert eval_multiplier(eta_bar, S_MAT) == RationalPhase(1, 8)
    twisted = make_quad_twist(MultiplierKind.THETA, 12)
    assert eval_multiplier(twisted, GammaMatrix(1, 0, 576, 1)) == RationalPhase(0, 1)


def test_eval_multiplier_level_check():
    theta = make_spec(MultiplierKind.THETA)
    with pytest.raises(ValueError):
        eval_multiplier(theta, GammaMatrix(1, 0, 2, 1))


def test_bar_spec_negates_phase():
    rng = random.Random(7)
    for kind in ALL_FIXED_KINDS:
        spec = make_spec(kind)
        mats = _gamma0_matrices(spec.level, 6 * spec.level)
        for g in rng.sample(mats, 10):
            assert eval_multiplier(bar_spec(spec), g) == -eval_multiplier(spec, g)
    tw = make_quad_twist(MultiplierKind.ETA, -4)
    g = GammaMatrix(1, 0, 16, 1)
    assert eval_multiplier(bar_spec(tw), g) == -eval_multiplier(tw, g)


def test_quad_twist_spec_shape():
    tw = make_quad_twist(MultiplierKind.ETA, 5)
    assert tw.level == 5  # 5 = 1 mod 4, modulus 5, lcm with level 1
    assert tw.weight == Fraction(1, 2)
    neg = make_quad_twist(MultiplierKind.ETA, -4)
    assert neg.weight == Fraction(-1, 2)  # odd character flips the weight
    assert neg.level == 16
    with pytest.raises(ValueError):
        make_quad_twist(MultiplierKind.ETA, 1)


# --------------------------------------------------------------- alpha


def test_alpha_of_examples():
    assert alpha_of(make_spec(MultiplierKind.ETA)) == Fraction(23, 24)
    assert alpha_of(make_spec(MultiplierKind.THETA)) == Fraction(0)
    assert alpha_of(make_spec(MultiplierKind.PSI)) == Fraction(1, 24)


def test_alpha_matches_spec_field():
    for kind in ALL_FIXED_KINDS:
        spec = make_spec(kind)
        assert alpha_of(spec) == spec.alpha


# --------------------------------------------------------------- cocycle


def test_cocycle_identity_factor():
    for g in _gamma0_matrices(1, 5):
        assert cocycle_w(I_MAT, g, Fraction(1, 2)) == RationalPhase(0, 1)
        assert cocycle_w(g, I_MAT, Fraction(1, 2)) == RationalPhase(0, 1)


def test_cocycle_minus_identity():
    # Consistency at g1 = g2 = -I forces w = e(k) . nu(-I)^{-2} = e(k)
    # since nu(-I) = e^{-pi i k}; for k = 1/2 that is the phase 1/2.
    assert cocycle_w(-I_MAT, -I_MAT, Fraction(1, 2)) == RationalPhase(1, 2)
    eta = make_spec(MultiplierKind.ETA)
    lhs = eval_multiplier(eta, I_MAT)
    rhs = (
        cocycle_w(-I_MAT, -I_MAT, eta.weight)
        + eval_multiplier(eta, -I_MAT)
        + eval_multiplier(eta, -I_MAT)
    )
    assert lhs == rhs


def test_cocycle_s_times_s():
    for k in (Fraction(1, 2), Fraction(-1, 2)):
        w = cocycle_w(S_MAT, S_MAT, k)
        assert w in (RationalPhase(0, 1), RationalPhase(1, 2))


def test_cocycle_law_random_pairs():
    rng = random.Random(12345)
    specs = [make_spec(kind) for kind in ALL_FIXED_KINDS]
    specs.append(make_quad_twist(MultiplierKind.THETA, 12))
    for spec in specs:
        mats = _gamma0_matrices(spec.level, 8 * spec.level)
        mats += [-g for g in mats[:: max(1, len(mats) // 20)]]
        for _ in range(50):
            g1, g2 = rng.choice(mats), rng.choice(mats)
            if (g1.c * g2.a + g1.d * g2.c) % spec.level:
                continue
            w = cocycle_w(g1, g2, spec.weight)
            assert w in (RationalPhase(0, 1), RationalPhase(1, 2))
            lhs = eval_multiplier(spec, g1 @ g2)
            rhs = w + eval_multiplier(spec, g1) + eval_multiplier(spec, g2)
            assert lhs == rhs, (spec.ident, g1, g2)


def test_translation_law():
    rng = random.Random(99)
    for kind in ALL_FIXED_KINDS:
        spec = make_spec(kind)
        nu_t = eval_multiplier(spec, T_MAT)
        mats = _gamma0_matrices(spec.level, 6 * spec.level)
        for g in rng.sample(mats, 10):
            for b in (-3, 1, 7):
                tb = GammaMatrix(1, b, 0, 1)
                assert eval_multiplier(spec, g @ tb) == eval_multiplier(spec, g) + b * nu_t

"""Exact rational phases, Kronecker symbols, and small number theory."""

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from klexact.arith import (
    RationalPhase,
    epsilon_d,
    euler_phi,
    kronecker,
    mod_inverse,
    sigma_k,
    square_decompose,
)


# ----------------------------------------------------------- kronecker


def test_kronecker_examples():
    assert kronecker(1, 1) == 1
    assert kronecker(-1, 3) == -1
    assert kronecker(2, 7) == 1  # 3^2 = 9 = 2 mod 7


def test_kronecker_against_quadratic_residues():
    # For odd prime n the symbol is the Legendre symbol.
    for n in (3, 5, 7, 11, 13):
        residues = {(x * x) % n for x in range(1, n)}
        for a in range(1, n):
            expected = 1 if a in residues else -1
            assert kronecker(a, n) == expected


def test_kronecker_multiplicative_in_top():
    # (ab/n) = (a/n)(b/n); the lone exception is n = -1 with exactly one
    # of a, b zero, where (0/-1) = 1 breaks the sign bookkeeping.
    for n in range(-60, 61):
        for a in range(-60, 61):
            ka = kronecker(a, n)
            for b in range(-60, 61):
                if n == -1 and (a == 0 or b == 0):
                    continue
                assert kronecker(a * b, n) == ka * kronecker(b, n)


@given(
    st.integers(min_value=-200, max_value=200),
    st.integers(min_value=-200, max_value=200),
    st.integers(min_value=-200, max_value=200),
)
def test_kronecker_multiplicative_random(a, b, n):
    if n == -1 and (a == 0 or b == 0):
        return
    assert kronecker(a * b, n) == kronecker(a, n) * kronecker(b, n)


def test_kronecker_zero_and_units():
    assert kronecker(0, 1) == 1
    assert kronecker(0, 2) == 0
    assert kronecker(5, 0) == 0
    assert kronecker(1, 0) == 1


# ------------------------------------------------------- rational phase


def test_phase_normalization():
    assert RationalPhase(3, 24) == RationalPhase(1, 8)
    assert RationalPhase(-1, 8) == RationalPhase(7, 8)
    assert RationalPhase(8, 8) == RationalPhase(0, 1)
    p = RationalPhase(25, 24)
    assert (p.num, p.den) == (1, 24)


def test_phase_group_laws_small():
    dens = range(1, 49)
    phases = [RationalPhase(n, d) for d in dens for n in range(d)]
    sample = phases[::37]
    for p in sample:
        assert p.conjugate().conjugate() == p
        assert p + p.conjugate() == RationalPhase(0, 1)
    for p in sample[:12]:
        for q in sample[:12]:
            for r in sample[:12]:
                assert (p + q) + r == p + (q + r)


@given(
    st.fractions(min_value=-10, max_value=10, max_denominator=48),
    st.fractions(min_value=-10, max_value=10, max_denominator=48),
)
def test_phase_add_matches_fraction_arithmetic(x, y):
    p = RationalPhase.from_fraction(x)
    q = RationalPhase.from_fraction(y)
    assert (p + q).as_fraction() == (x + y) % 1


def test_phase_requires_nonzero_denominator():
    with pytest.raises(ValueError):
        RationalPhase(1, 0)


# ------------------------------------------------------------ epsilon_d


def test_epsilon_d_examples():
    assert epsilon_d(1) == RationalPhase(0, 1)
    assert epsilon_d(3) == RationalPhase(1, 4)
    assert epsilon_d(-5) == RationalPhase(1, 4)  # -5 = 3 mod 4


def test_epsilon_d_rejects_even():
    with pytest.raises(ValueError):
        epsilon_d(2)


# -------------------------------------------------------------- sigma_k


def test_sigma_k_examples():
    assert sigma_k(0, 1) == 1
    assert sigma_k(0, 12) == 6
    assert sigma_k(1, 6) == 12


def test_sigma_k_negative_exponent_is_rational():
    assert sigma_k(-1, 4) == Fraction(7, 4)


# ----------------------------------------------------- square_decompose


def test_square_decompose_examples():
    d = square_decompose(1, 24)
    assert (d.t, d.u, d.w) == (1, 1, 1)
    d = square_decompose(72, 24)
    assert (d.t, d.u, d.w) == (2, 6, 1)
    d = square_decompose(50, 24)
    assert (d.t, d.u, d.w) == (2, 1, 5)


def test_square_decompose_round_trip():
    from math import gcd

    for M in (24, 576):
        for x in range(1, 10_001):
            dec = square_decompose(x, M)
            t, u, w = dec.t, dec.u, dec.w
            assert t * u * u * w * w == x
            assert gcd(w, M) == 1
            # t square-free
            d = 2
            while d * d <= t:
                assert t % (d * d) != 0
                d += 1
            # u supported on the primes of M
            uu = u
            g = gcd(uu, M)
            while g > 1:
                while uu % g == 0:
                    uu //= g
                g = gcd(uu, M)
            assert uu == 1


# ---------------------------------------------------------- mod_inverse


def test_mod_inverse_examples():
    assert mod_inverse(1, 5) == 1
    assert mod_inverse(3, 7) == 5
    assert mod_inverse(0, 1) == 0


def test_mod_inverse_property():
    for c in range(1, 80):
        for d in range(c):
            from math import gcd

            if gcd(d, c) != 1:
                with pytest.raises(ValueError):
                    mod_inverse(d, c)
                continue
            dbar = mod_inverse(d, c)
            assert 0 <= dbar < c
            assert (dbar * d) % c == 1 % c


# ------------------------------------------------------------ euler_phi


def test_euler_phi_small():
    from math import gcd

    for n in range(1, 200):
        assert euler_phi(n) == sum(1 for d in range(n) if gcd(d, n) == 1)

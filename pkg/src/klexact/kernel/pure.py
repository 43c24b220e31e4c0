"""Double-precision Kloosterman term loops, pure Python backend.

Each sum is evaluated termwise from closed multiplier formulas with all
phases carried as integers over the common denominator 24c.  This is
the reference implementation; the compiled backend mirrors it exactly
and both are cross-checked against the exact phase-multiset route.
"""

from __future__ import annotations

from math import cos, gcd, sin, tau

from klexact.arith import kronecker

_CODES = {
    "standard": 0,
    "eta": 1,
    "eta_bar": 2,
    "theta": 3,
    "theta_bar": 4,
    "psi": 5,
    "third_twist_eta_bar": 6,
}

# 24 * alpha for each code; tilde index is (24 m - alpha24) / 24
_ALPHA24 = {0: 0, 1: 23, 2: 1, 3: 0, 4: 0, 5: 1, 6: 1}


def sum_eval_raw(kind: str, m: int, n: int, c: int, disc: int = 0) -> complex:
    code = _CODES[kind]
    mm = 24 * m - _ALPHA24[code]
    nn = 24 * n - _ALPHA24[code]
    M = 24 * c
    scale = tau / M
    cc1 = c * c - 1
    re = 0.0
    im = 0.0
    for d in range(c):
        if gcd(d, c) != 1:
            continue
        a = pow(d, -1, c)
        b = (a * d - 1) // c
        if code == 0:
            sgn = 1
            e_nu = 0
        elif code == 3 or code == 4:
            # conj is (c/d) eps_d^(+-1); the quarter phase is 6c/(24c)
            sgn = kronecker(c, d)
            if d % 4 == 3:
                e_nu = 6 * c if code == 3 else -6 * c
            else:
                e_nu = 0
        else:
            # eta-based kinds start from the closed form for nu_eta
            if c % 2:
                sgn = kronecker(d, c)
                K = (a + d) * c - b * d * cc1 - 3 * c
            else:
                sgn = kronecker(c, d)
                K = (a + d) * c - b * d * cc1 + 3 * d - 3 - 3 * c * d
            if code == 1:  # conj(nu_eta) = sgn e(-K/24)
                e_nu = -K * c
            elif code == 2:  # conj(conj(nu_eta)) = nu_eta
                e_nu = K * c
            elif code == 6:  # conj of (d/3) conj(nu_eta)
                e_nu = K * c
                sgn *= kronecker(d, 3)
            else:  # conj(psi) = e(-c/8) (-1/d)^(c/2+1) nu_eta
                e_nu = K * c - 3 * c * c
                if (c // 2 + 1) % 2 and d % 4 == 3:
                    sgn = -sgn
        if disc:
            sgn *= kronecker(disc, d)
            if sgn == 0:
                continue
        ang = scale * ((e_nu + mm * a + nn * d) % M)
        re += sgn * cos(ang)
        im += sgn * sin(ang)
    return complex(re, im)


def kron(a: int, n: int) -> int:
    return kronecker(a, n)

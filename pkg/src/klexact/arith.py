"""Exact integer and rational primitives.

Everything here is pure and exact: the extended Kronecker symbol, the
quarter-phase unit epsilon_d, divisor power sums, modular inverses, the
square-part factorization x = t*u^2*w^2, and the RationalPhase type that
represents unit complex numbers e(p/q) as exact elements of Q/Z.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt


@dataclass(frozen=True, slots=True)
class RationalPhase:
    """An element of Q/Z standing for the unit complex number e(num/den).

    Normalized so that 0 <= num < den and gcd(num, den) == 1.  Adding
    phases multiplies the underlying unit complex numbers; negation is
    complex conjugation.
    """

    num: int
    den: int

    def __post_init__(self) -> None:
        if self.den <= 0:
            raise ValueError("denominator must be positive")
        num, den = self.num % self.den, self.den
        g = gcd(num, den)
        object.__setattr__(self, "num", num // g)
        object.__setattr__(self, "den", den // g)

    @classmethod
    def from_fraction(cls, x: Fraction | int) -> RationalPhase:
        x = Fraction(x)
        return cls(x.numerator, x.denominator)

    def as_fraction(self) -> Fraction:
        return Fraction(self.num, self.den)

    def __add__(self, other: RationalPhase) -> RationalPhase:
        return RationalPhase(
            self.num * other.den + other.num * self.den, self.den * other.den
        )

    def __neg__(self) -> RationalPhase:
        return RationalPhase(-self.num, self.den)

    def __sub__(self, other: RationalPhase) -> RationalPhase:
        return self + (-other)

    def __mul__(self, k: int) -> RationalPhase:
        """k-th power of the unit complex number: phase scaled by an integer."""
        if not isinstance(k, int):
            return NotImplemented
        return RationalPhase(self.num * k, self.den)

    __rmul__ = __mul__

    def conjugate(self) -> RationalPhase:
        return -self

    def __str__(self) -> str:
        return f"{self.num}/{self.den}"


ZERO_PHASE = RationalPhase(0, 1)
HALF_PHASE = RationalPhase(1, 2)


@dataclass(frozen=True, slots=True)
class SquareDecomposition:
    """x = t * u**2 * w**2 with t square-free, u | M**inf, gcd(w, M) = 1."""

    t: int
    u: int
    w: int


def kronecker(a: int, n: int) -> int:
    """Extended Kronecker symbol (a/n), defined for all integer pairs.

    Conventions: (a/0) = 1 iff a = +-1 else 0; (a/-1) = -1 iff a < 0;
    (a/2) = 0 for even a and +-1 according to a mod 8 otherwise.  Fully
    multiplicative in n; multiplicative in a except for the degenerate
    corner n = -1, a*b = 0 with the other factor negative, where
    (0/-1) = 1 breaks the product rule.
    """
    if n == 0:
        return 1 if a in (1, -1) else 0
    if n < 0:
        result = -1 if a < 0 else 1
        n = -n
    else:
        result = 1
    if n % 2 == 0:
        if a % 2 == 0:
            return 0
        while n % 2 == 0:
            n //= 2
            if a % 8 in (3, 5):
                result = -result
    # jacobi loop: n odd positive from here on
    a %= n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def epsilon_d(d: int) -> RationalPhase:
    """The unit epsilon_d: 1 for d = 1 mod 4, i for d = 3 mod 4 (d odd)."""
    if d % 2 == 0:
        raise ValueError("epsilon_d requires odd d")
    return ZERO_PHASE if d % 4 == 1 else RationalPhase(1, 4)


def sigma_k(k: int, ell: int) -> int | Fraction:
    """Divisor power sum sum_{d | ell} d**k, exact."""
    if ell < 1:
        raise ValueError("sigma_k requires ell >= 1")
    divisors = []
    for d in range(1, isqrt(ell) + 1):
        if ell % d == 0:
            divisors.append(d)
            if d != ell // d:
                divisors.append(ell // d)
    if k >= 0:
        return sum(d**k for d in divisors)
    return sum(Fraction(1, d**-k) for d in divisors)


def euler_phi(n: int) -> int:
    """Count of units mod n."""
    if n < 1:
        raise ValueError("euler_phi requires n >= 1")
    out = n
    for p in _factorize(n):
        out -= out // p
    return out


def _factorize(x: int) -> dict[int, int]:
    """Prime factorization by trial division; fine at desk scale."""
    factors: dict[int, int] = {}
    for p in (2, 3):
        while x % p == 0:
            factors[p] = factors.get(p, 0) + 1
            x //= p
    p = 5
    while p * p <= x:
        for q in (p, p + 2):
            while x % q == 0:
                factors[q] = factors.get(q, 0) + 1
                x //= q
        p += 6
    if x > 1:
        factors[x] = factors.get(x, 0) + 1
    return factors


def square_decompose(x: int, M: int) -> SquareDecomposition:
    """Unique (t, u, w) with x = t*u^2*w^2, t square-free, u | M^inf, gcd(w,M)=1."""
    if x < 1 or M < 1:
        raise ValueError("square_decompose requires positive x and M")
    t = u = w = 1
    for p, e in _factorize(x).items():
        if e % 2:
            t *= p
        half = p ** (e // 2)
        if M % p == 0:
            u *= half
        else:
            w *= half
    return SquareDecomposition(t, u, w)


def mod_inverse(d: int, c: int) -> int:
    """The inverse of d mod c in [0, c); requires gcd(d, c) = 1."""
    if c < 1:
        raise ValueError("modulus must be positive")
    try:
        return pow(d, -1, c)
    except ValueError:
        raise ValueError(f"{d} is not invertible mod {c}") from None

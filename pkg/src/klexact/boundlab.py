"""Numeric laboratory for Kloosterman sum bounds and cancellation.

Checks the square-root bounds termwise over parameter boxes, fits
log-log decay exponents to partial sums, and measures how much the
signed partial sums beat the triangle inequality.  Everything here runs
through the double-precision kernel; the exact route pins the kernel's
accuracy elsewhere, so a wide margin on top of the bound covers the
rounding error.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd, sqrt
from typing import Callable, Iterable, Sequence

import numpy as np

from klexact import kernel
from klexact.arith import euler_phi, sigma_k, square_decompose
from klexact.cache import KloostermanCache
from klexact.multipliers import (
    MultiplierKind,
    MultiplierSpec,
    make_quad_twist,
    make_spec,
)
from klexact.sums import ExpSum, kernel_S

# double rounding margin per term of the kernel loop
_TERM_EPS = 1e-12


@dataclass(slots=True)
class FitReport:
    exponent: float
    intercept: float
    residual: float
    sample_range: tuple[float, float]
    points: list[tuple[float, float]]
    dropped: int = 0


@dataclass(slots=True)
class BoundReport:
    checked: int
    violations: list[dict] = field(default_factory=list)
    max_ratio: float = 0.0
    windows: list[tuple[int, int, float]] | None = None


def _check_box(
    level: int,
    sum_fn: Callable[[int, int, int], complex],
    m_range: Iterable[int],
    n_range: Iterable[int],
    c_max: int,
    rhs_fn: Callable[[int, int, int], float],
) -> BoundReport:
    ms = list(m_range)
    ns = list(n_range)
    report = BoundReport(checked=0)
    for c in range(level, c_max + 1, level):
        margin_terms = euler_phi(c) * _TERM_EPS
        for m in ms:
            for n in ns:
                lhs = abs(sum_fn(m, n, c))
                rhs = rhs_fn(m, n, c)
                report.checked += 1
                if rhs > 0:
                    report.max_ratio = max(report.max_ratio, lhs / rhs)
                if lhs > rhs + 1e-9 * rhs + margin_terms:
                    report.violations.append(
                        {"m": m, "n": n, "c": c, "lhs": lhs, "rhs": rhs}
                    )
    return report


def _sqrt_budget(m: int, n: int, c: int) -> float:
    return float(sigma_k(0, c)) * sqrt(gcd(m, n, c)) * sqrt(c)


def weil_check_standard(
    m_range: Iterable[int], n_range: Iterable[int], c_max: int
) -> BoundReport:
    """|S(m, n, c)| <= sigma_0(c) gcd(m, n, c)^(1/2) c^(1/2), termwise."""
    return _check_box(
        1,
        lambda m, n, c: kernel.sum_eval("standard", m, n, c),
        m_range,
        n_range,
        c_max,
        _sqrt_budget,
    )


def weil_check_theta_type(
    spec: MultiplierSpec,
    m_range: Iterable[int],
    n_range: Iterable[int],
    c_max: int,
) -> BoundReport:
    """The same square-root bound for theta-type multipliers with even
    character, over admissible c (multiples of the level, so 4 | c)."""
    base = spec.twist_base if spec.kind is MultiplierKind.QUAD_TWIST else spec.kind
    if base not in (MultiplierKind.THETA, MultiplierKind.THETA_BAR):
        raise ValueError("spec must be a theta-type multiplier")
    if spec.kind is MultiplierKind.QUAD_TWIST and spec.twist_disc < 0:
        raise ValueError("the bound needs an even character: discriminant > 0")
    return _check_box(
        spec.level,
        lambda m, n, c: kernel_S(m, n, c, spec),
        m_range,
        n_range,
        c_max,
        _sqrt_budget,
    )


def weil_check_eta_twist(
    q: int,
    m_range: Iterable[int],
    n_range: Iterable[int],
    c_max: int,
    constant: float | None = None,
) -> BoundReport:
    """Ratio scan against q^(3/2) sigma_0((A, c)) sigma_0(c) c^(1/2)
    gcd((24m-23)(24n-23), c)^(1/2) for the eta multiplier twisted by the
    quadratic character mod q, with A^2 the square part of 24m - 23.

    q = 1 is the plain eta multiplier, q = 3 the cubic-level twist.  The
    bound holds up to an absolute constant; pass one to flag violations,
    otherwise only max_ratio is filled in.
    """
    if q == 1:
        spec = make_spec(MultiplierKind.ETA)
    elif q == 3:
        spec = make_quad_twist(MultiplierKind.ETA, -3)
    else:
        raise ValueError("supported twist moduli are q = 1 and q = 3")
    qq = q**1.5

    def rhs(m: int, n: int, c: int) -> float:
        body = abs(24 * m - 23)
        alpha = square_decompose(body, 1).w if body else 1
        mn = abs((24 * m - 23) * (24 * n - 23))
        val = qq * sigma_k(0, gcd(alpha, c)) * sigma_k(0, c) * sqrt(c) * sqrt(gcd(mn, c))
        return val if constant is None else constant * val

    report = _check_box(
        spec.level,
        lambda m, n, c: kernel_S(m, n, c, spec),
        m_range,
        n_range,
        c_max,
        rhs,
    )
    if constant is None:
        report.violations = []
    return report


def decay_fit(points: Sequence[tuple[float, float]]) -> FitReport:
    """Least-squares slope of log|y| against log x.

    Points with y = 0 are dropped and counted; all-zero input and
    nonpositive x are rejected.
    """
    pts = [(float(x), float(y)) for x, y in points]
    if len(pts) < 8:
        raise ValueError("need at least 8 points for a stable fit")
    if any(x <= 0 for x, _ in pts):
        raise ValueError("x values must be positive")
    kept = [(x, abs(y)) for x, y in pts if y != 0]
    dropped = len(pts) - len(kept)
    if not kept:
        raise ValueError("all y values are zero; nothing to fit")
    if len(kept) < 2:
        raise ValueError("too few nonzero points to fit")
    logx = np.log([x for x, _ in kept])
    logy = np.log([y for _, y in kept])
    slope, intercept = np.polyfit(logx, logy, 1)
    resid = float(np.sqrt(np.mean((slope * logx + intercept - logy) ** 2)))
    return FitReport(
        exponent=float(slope),
        intercept=float(intercept),
        residual=resid,
        sample_range=(min(x for x, _ in kept), max(x for x, _ in kept)),
        points=kept,
        dropped=dropped,
    )


def _cached_value(
    cache: KloostermanCache | None, spec: MultiplierSpec, m: int, n: int, c: int
) -> complex:
    if cache is not None:
        terms = cache.get((spec.ident, m, n, c))
        if terms is not None:
            val, _ = ExpSum(terms, spec.ident, m, n, c).evaluate(64)
            return complex(float(val.real), float(val.imag))
    return kernel_S(m, n, c, spec)


def partial_sum(
    m: int,
    n: int,
    spec: MultiplierSpec,
    X: float,
    cache: KloostermanCache | None = None,
) -> complex:
    """sum of S(m, n, c, nu) / c over admissible c <= X.

    Cached phase multisets are used when a cache is supplied; nothing is
    written back.
    """
    total = 0j
    for c in range(spec.level, int(X) + 1, spec.level):
        total += _cached_value(cache, spec, m, n, c) / c
    return total


def cancellation_experiment(
    m: int,
    n: int,
    spec: MultiplierSpec,
    X_grid: Sequence[float],
    cache: KloostermanCache | None = None,
    control: bool = False,
) -> FitReport:
    """Growth exponent of the weighted partial sums sum_{c<=X} S/c.

    One pass accumulates the partial sums, sampling |value| at each grid
    point, and fits the log-log slope.  With control=True the absolute
    values |S|/c are accumulated instead, giving the no-cancellation
    baseline the signed exponent should sit well below.
    """
    grid = sorted(int(x) for x in X_grid)
    if not grid or grid[0] < spec.level:
        raise ValueError("grid must start at or above the multiplier level")
    signed = 0j
    absolute = 0.0
    pts: list[tuple[float, float]] = []
    c = spec.level
    for target in grid:
        while c <= target:
            val = _cached_value(cache, spec, m, n, c)
            if control:
                absolute += abs(val) / c
            else:
                signed += val / c
            c += spec.level
        pts.append((float(target), absolute if control else abs(signed)))
    return decay_fit(pts)


def average_weil_windows(
    m: int, n: int, spec: MultiplierSpec, x_max: int, first: int = 8
) -> BoundReport:
    """Dyadic-window averages of |S| against the square-root budget.

    Each window (N, 2N] gets the ratio of sum |S(m, n, c, nu)| to sum
    sigma_0(c) sqrt(c); a healthy bound keeps the ratios within a factor
    4 of each other, and windows breaking that are listed as violations.
    """
    windows: list[tuple[int, int, float]] = []
    lo = max(first, spec.level)
    while lo < x_max:
        hi = min(2 * lo, x_max)
        num = 0.0
        den = 0.0
        for c in range(lo + 1, hi + 1):
            if c % spec.level:
                continue
            num += abs(kernel_S(m, n, c, spec))
            den += float(sigma_k(0, c)) * sqrt(c)
        if den > 0:
            windows.append((lo, hi, num / den))
        lo = hi
    report = BoundReport(checked=len(windows), windows=windows)
    ratios = [r for _, _, r in windows if r > 0]
    if ratios:
        report.max_ratio = max(ratios)
        base = min(ratios)
        report.violations = [
            {"lo": lo, "hi": hi, "ratio": r}
            for lo, hi, r in windows
            if r > 4 * base
        ]
    return report

"""Kernel selection: compiled extension when available, pure Python otherwise.

Set KLEXACT_KERNEL to "pure" or "compiled" to force a backend; the
default "auto" prefers the compiled one.  Calls outside the compiled
backend's int64-safe range fall through to the pure loop transparently.
"""

from __future__ import annotations

import os
from math import lcm

from klexact.kernel import pure as _pure

_COMPILED_C_LIMIT = 50000
_COMPILED_MN_LIMIT = 10**6

_impl = _pure
_BACKEND = "pure"

_choice = os.environ.get("KLEXACT_KERNEL", "auto")
if _choice not in ("auto", "pure", "compiled"):
    raise RuntimeError(f"KLEXACT_KERNEL must be auto, pure or compiled, not {_choice!r}")
if _choice != "pure":
    try:
        from klexact import _fastkernel as _impl  # type: ignore[no-redef]

        _BACKEND = "compiled"
    except ImportError:
        if _choice == "compiled":
            raise RuntimeError(
                "KLEXACT_KERNEL=compiled but the extension is not built"
            ) from None

_LEVELS = {
    "standard": 1,
    "eta": 1,
    "eta_bar": 1,
    "theta": 4,
    "theta_bar": 4,
    "psi": 2,
    "third_twist_eta_bar": 3,
}


def kernel_name() -> str:
    return _BACKEND


def twist_modulus(disc: int) -> int:
    """Conductor-style modulus of the quadratic character (disc/.)."""
    if disc in (0, 1):
        raise ValueError("discriminant must not be 0 or 1")
    return abs(disc) if disc % 4 == 1 else 4 * abs(disc)


def sum_eval(kind: str, m: int, n: int, c: int, disc: int = 0) -> complex:
    """Double-precision S(m, n, c, nu) for the named multiplier kind."""
    if kind not in _LEVELS:
        raise ValueError(f"unknown multiplier kind {kind!r}")
    if c < 1:
        raise ValueError("c must be positive")
    level = _LEVELS[kind]
    if disc:
        level = lcm(level, twist_modulus(disc))
    if c % level:
        raise ValueError(f"level {level} does not divide c = {c}")
    if _BACKEND == "compiled" and (
        c > _COMPILED_C_LIMIT or max(abs(m), abs(n)) > _COMPILED_MN_LIMIT
    ):
        return _pure.sum_eval_raw(kind, m, n, c, disc)
    return _impl.sum_eval_raw(kind, m, n, c, disc)


def kron(a: int, n: int) -> int:
    return _impl.kron(a, n)

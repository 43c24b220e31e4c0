"""Exact Kloosterman sums for half-integral-weight multiplier systems,
and the convergent series they feed: the partition count p(n) and the
two exact rank statistics A(1/2; n) and A(1/3; n).

The package keeps two parallel routes everywhere: an exact symbolic one
(phase multisets over Q, Dedekind sums as fractions) and a fast numeric
one (a compiled term loop with a pure Python fallback).  Tests pin the
two routes against each other and against combinatorial oracles.
"""

from klexact.arith import RationalPhase, kronecker
from klexact.multipliers import (
    GammaMatrix,
    MultiplierKind,
    MultiplierSpec,
    make_quad_twist,
    make_spec,
)
from klexact.series import andrews_dragonette, rademacher_p, rank_mod3_exact, tail_R
from klexact.sums import ExpSum, classic_A, generalized_S, standard_S

__version__ = "0.1.0"

__all__ = [
    "ExpSum",
    "GammaMatrix",
    "MultiplierKind",
    "MultiplierSpec",
    "RationalPhase",
    "andrews_dragonette",
    "classic_A",
    "generalized_S",
    "kronecker",
    "make_quad_twist",
    "make_spec",
    "rademacher_p",
    "rank_mod3_exact",
    "standard_S",
    "tail_R",
    "__version__",
]

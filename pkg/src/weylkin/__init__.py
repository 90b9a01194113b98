"""Symbolic and numerical consequences of the canonical commutation relation."""

from .algebra import (
    HBAR,
    I,
    ONE,
    P,
    X,
    ZERO,
    GaussianRational,
    HbarLaurent,
    WeylPolynomial,
    anticommutator,
    commutator,
    conjugate_series,
    deriv,
    iterated_commutator,
    mul,
    taylor_shift,
)
from .parser import format_polynomial, normal_order, parse, evaluate

__version__ = "0.1.0"

__all__ = [
    "HBAR", "I", "ONE", "P", "X", "ZERO",
    "GaussianRational", "HbarLaurent", "WeylPolynomial",
    "anticommutator", "commutator", "conjugate_series", "deriv",
    "iterated_commutator", "mul", "taylor_shift",
    "format_polynomial", "normal_order", "parse", "evaluate",
]

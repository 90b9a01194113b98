"""Exact normal-ordered algebra generated by X and P with XP - PX = i*hbar.

Every value is immutable.  Scalars are Gaussian rationals (``Fraction``
real and imaginary parts); coefficients of a monomial are Laurent
polynomials in hbar so that the ``-i/hbar`` prefactors of commutator towers
can be carried before they cancel.  Monomials are stored in normal order,
``X^m P^n`` with all X factors to the left.
"""

from __future__ import annotations

import random
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping, Tuple, Union

__all__ = [
    "GaussianRational",
    "HbarLaurent",
    "WeylMonomial",
    "WeylPolynomial",
    "PDependenceError",
    "X",
    "P",
    "ONE",
    "ZERO",
    "HBAR",
    "I",
    "mul",
    "commutator",
    "anticommutator",
    "deriv",
    "iterated_commutator",
    "conjugate_series",
    "taylor_shift",
    "random_polynomial",
]

RationalLike = Union[int, Fraction]


class PDependenceError(ValueError):
    """Raised when an operation defined for functions of X receives a P term."""


class GaussianRational:
    """Exact complex number ``re + i*im`` with rational parts."""

    __slots__ = ("re", "im")

    def __init__(self, re: RationalLike = 0, im: RationalLike = 0):
        object.__setattr__(self, "re", Fraction(re))
        object.__setattr__(self, "im", Fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    @classmethod
    def coerce(cls, value) -> "GaussianRational":
        if isinstance(value, GaussianRational):
            return value
        if isinstance(value, (int, Fraction)):
            return cls(value)
        if isinstance(value, complex):
            raise TypeError("floating-point complex values are not exact")
        raise TypeError(f"cannot interpret {value!r} as a Gaussian rational")

    def __add__(self, other):
        other = _maybe_gr(other)
        if other is NotImplemented:
            return other
        return GaussianRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = _maybe_gr(other)
        if other is NotImplemented:
            return other
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        other = _maybe_gr(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = _maybe_gr(other)
        if other is NotImplemented:
            return other
        return GaussianRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _maybe_gr(other)
        if other is NotImplemented:
            return other
        den = other.re * other.re + other.im * other.im
        if den == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        num = self * other.conjugate()
        return GaussianRational(num.re / den, num.im / den)

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only non-negative integer powers are supported")
        result = GaussianRational(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        other = _maybe_gr(other)
        if other is NotImplemented:
            return other
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"GaussianRational({self.re!s}, {self.im!s})"


def _maybe_gr(value):
    if isinstance(value, GaussianRational):
        return value
    if isinstance(value, (int, Fraction)) and not isinstance(value, bool):
        return GaussianRational(value)
    return NotImplemented


_GR_ZERO = GaussianRational(0)
_GR_ONE = GaussianRational(1)
_GR_I = GaussianRational(0, 1)


class HbarLaurent:
    """Finite Laurent polynomial in hbar, ``{exponent: GaussianRational}``.

    Zero coefficients are never stored, so equality is a plain mapping
    comparison.
    """

    __slots__ = ("_coeffs", "_hash")

    def __init__(self, coeffs: Mapping[int, GaussianRational] | None = None):
        clean = {}
        if coeffs:
            for k, c in coeffs.items():
                c = GaussianRational.coerce(c)
                if c:
                    clean[int(k)] = c
        object.__setattr__(self, "_coeffs", clean)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("HbarLaurent is immutable")

    @classmethod
    def _trusted(cls, clean: dict) -> "HbarLaurent":
        obj = cls.__new__(cls)
        object.__setattr__(obj, "_coeffs", clean)
        object.__setattr__(obj, "_hash", None)
        return obj

    @classmethod
    def constant(cls, value) -> "HbarLaurent":
        return cls({0: GaussianRational.coerce(value)})

    @classmethod
    def hbar_power(cls, k: int, coeff=1) -> "HbarLaurent":
        return cls({k: GaussianRational.coerce(coeff)})

    @property
    def coeffs(self) -> Mapping[int, GaussianRational]:
        return MappingProxyType(self._coeffs)

    def items(self):
        return self._coeffs.items()

    def __iter__(self) -> Iterator[int]:
        return iter(self._coeffs)

    def __bool__(self):
        return bool(self._coeffs)

    def __add__(self, other):
        other = _maybe_laurent(other)
        if other is NotImplemented:
            return other
        out = dict(self._coeffs)
        for k, c in other._coeffs.items():
            s = out.get(k, _GR_ZERO) + c
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return HbarLaurent._trusted(out)

    __radd__ = __add__

    def __neg__(self):
        return HbarLaurent._trusted({k: -c for k, c in self._coeffs.items()})

    def __sub__(self, other):
        other = _maybe_laurent(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = _maybe_laurent(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, GaussianRational) or (
            isinstance(other, (int, Fraction)) and not isinstance(other, bool)
        ):
            other = GaussianRational.coerce(other)
            if not other:
                return HbarLaurent._trusted({})
            return HbarLaurent._trusted(
                {k: c * other for k, c in self._coeffs.items()}
            )
        if not isinstance(other, HbarLaurent):
            return NotImplemented
        out: dict = {}
        for k1, c1 in self._coeffs.items():
            for k2, c2 in other._coeffs.items():
                k = k1 + k2
                s = out.get(k, _GR_ZERO) + c1 * c2
                if s:
                    out[k] = s
                else:
                    out.pop(k, None)
        return HbarLaurent._trusted(out)

    __rmul__ = __mul__

    def __eq__(self, other):
        other = _maybe_laurent(other)
        if other is NotImplemented:
            return other
        return self._coeffs == other._coeffs

    def __hash__(self):
        if self._hash is None:
            object.__setattr__(
                self, "_hash", hash(frozenset(self._coeffs.items()))
            )
        return self._hash

    def __repr__(self):
        body = ", ".join(f"{k}: {c!r}" for k, c in sorted(self._coeffs.items()))
        return f"HbarLaurent({{{body}}})"


def _maybe_laurent(value):
    if isinstance(value, HbarLaurent):
        return value
    gr = _maybe_gr(value)
    if gr is NotImplemented:
        return gr
    return HbarLaurent.constant(gr)


WeylMonomial = Tuple[int, int]
"""Normal-ordered monomial ``X^xpow P^ppow`` encoded as ``(xpow, ppow)``."""


class WeylPolynomial:
    """Normal-ordered polynomial in X and P with hbar-Laurent coefficients.

    ``terms`` maps ``(xpow, ppow)`` to a nonzero :class:`HbarLaurent`.
    Arithmetic operators are overloaded; ``*`` is the noncommutative
    product.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[WeylMonomial, HbarLaurent] | None = None):
        clean = {}
        if terms:
            for mono, coeff in terms.items():
                xpow, ppow = mono
                if xpow < 0 or ppow < 0:
                    raise ValueError("monomial exponents must be non-negative")
                coeff = _maybe_laurent(coeff)
                if coeff is NotImplemented:
                    raise TypeError(f"bad coefficient {coeff!r}")
                if coeff:
                    key = (int(xpow), int(ppow))
                    prev = clean.get(key)
                    coeff = coeff if prev is None else prev + coeff
                    if coeff:
                        clean[key] = coeff
                    else:
                        clean.pop(key, None)
        object.__setattr__(self, "_terms", clean)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("WeylPolynomial is immutable")

    @classmethod
    def _trusted(cls, clean: dict) -> "WeylPolynomial":
        obj = cls.__new__(cls)
        object.__setattr__(obj, "_terms", clean)
        object.__setattr__(obj, "_hash", None)
        return obj

    @classmethod
    def monomial(cls, xpow: int = 0, ppow: int = 0, coeff=1) -> "WeylPolynomial":
        return cls({(xpow, ppow): _maybe_laurent(coeff)})

    @classmethod
    def constant(cls, value) -> "WeylPolynomial":
        return cls({(0, 0): _maybe_laurent(value)})

    @classmethod
    def from_x_coeffs(cls, coeffs: Iterable) -> "WeylPolynomial":
        """Build ``sum_n coeffs[n] X^n``."""
        return cls({(n, 0): _maybe_laurent(c) for n, c in enumerate(coeffs)})

    @property
    def terms(self) -> Mapping[WeylMonomial, HbarLaurent]:
        return MappingProxyType(self._terms)

    def items(self):
        return self._terms.items()

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def __len__(self):
        return len(self._terms)

    @property
    def x_degree(self) -> int:
        return max((m[0] for m in self._terms), default=0)

    @property
    def p_degree(self) -> int:
        return max((m[1] for m in self._terms), default=0)

    def is_x_only(self) -> bool:
        return all(ppow == 0 for _, ppow in self._terms)

    def scale(self, factor) -> "WeylPolynomial":
        factor = _maybe_laurent(factor)
        if not factor:
            return ZERO
        out = {}
        for mono, c in self._terms.items():
            c = c * factor
            if c:
                out[mono] = c
        return WeylPolynomial._trusted(out)

    def __add__(self, other):
        other = _as_poly(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for mono, c in other._terms.items():
            prev = out.get(mono)
            s = c if prev is None else prev + c
            if s:
                out[mono] = s
            else:
                out.pop(mono, None)
        return WeylPolynomial._trusted(out)

    def __radd__(self, other):
        return self + other

    def __neg__(self):
        return WeylPolynomial._trusted({m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        other = _as_poly(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = _as_poly(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = _as_poly(other)
        if other is NotImplemented:
            return other
        return mul(self, other)

    def __rmul__(self, other):
        other = _as_poly(other)
        if other is NotImplemented:
            return other
        return mul(other, self)

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only non-negative integer powers are supported")
        result = ONE
        base = self
        while n:
            if n & 1:
                result = mul(result, base)
            n >>= 1
            if n:
                base = mul(base, base)
        return result

    def __eq__(self, other):
        other = _as_poly(other)
        if other is NotImplemented:
            return other
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            object.__setattr__(self, "_hash", hash(frozenset(self._terms.items())))
        return self._hash

    def __repr__(self):
        from .parser import format_polynomial

        return f"WeylPolynomial({format_polynomial(self)!r})"


def _as_poly(value):
    if isinstance(value, WeylPolynomial):
        return value
    coeff = _maybe_laurent(value)
    if coeff is NotImplemented:
        return coeff
    return WeylPolynomial.constant(coeff)


ZERO = WeylPolynomial()
ONE = WeylPolynomial.constant(1)
X = WeylPolynomial.monomial(1, 0)
P = WeylPolynomial.monomial(0, 1)
HBAR = WeylPolynomial({(0, 0): HbarLaurent.hbar_power(1)})
I = WeylPolynomial.constant(_GR_I)

# -i*hbar, the scalar produced by one PX -> XP rewrite
_MINUS_I_HBAR = HbarLaurent.hbar_power(1, GaussianRational(0, -1))
_MINUS_I_OVER_HBAR = HbarLaurent.hbar_power(-1, GaussianRational(0, -1))


def _accumulate(out: dict, mono: WeylMonomial, coeff: HbarLaurent) -> None:
    prev = out.get(mono)
    s = coeff if prev is None else prev + coeff
    if s:
        out[mono] = s
    else:
        out.pop(mono, None)


@lru_cache(maxsize=None)
def _pass_x_through(b: int) -> Tuple[Tuple[WeylMonomial, HbarLaurent], ...]:
    """Normal form of ``P^b X`` by repeated single-adjacency rewrites.

    ``P^b X = (P^(b-1) X) P - i hbar P^(b-1)``; each step removes one PX
    adjacency, so the recursion is finite.
    """
    if b == 0:
        return (((1, 0), HbarLaurent.constant(1)),)
    out: dict = {}
    for (xp, pp), c in _pass_x_through(b - 1):
        _accumulate(out, (xp, pp + 1), c)
    _accumulate(out, (0, b - 1), _MINUS_I_HBAR)
    return tuple(out.items())


@lru_cache(maxsize=None)
def reorder(n: int, m: int) -> Tuple[Tuple[WeylMonomial, HbarLaurent], ...]:
    """Normal form of ``P^n X^m`` as a tuple of ``((xpow, ppow), coeff)``."""
    if n == 0 or m == 0:
        return (((m, n), HbarLaurent.constant(1)),)
    out: dict = {}
    # P^n X^m = (P^n X^(m-1)) X; move the trailing X left through each P^b
    for (a, b), c in reorder(n, m - 1):
        for (xp, pp), c2 in _pass_x_through(b):
            _accumulate(out, (a + xp, pp), c * c2)
    return tuple(out.items())


def mul(a: WeylPolynomial, b: WeylPolynomial) -> WeylPolynomial:
    """Noncommutative product in normal order."""
    out: dict = {}
    for (a1, b1), c1 in a._terms.items():
        for (a2, b2), c2 in b._terms.items():
            c12 = c1 * c2
            if b1 == 0 or a2 == 0:
                _accumulate(out, (a1 + a2, b1 + b2), c12)
                continue
            for (xp, pp), c in reorder(b1, a2):
                _accumulate(out, (a1 + xp, pp + b2), c12 * c)
    return WeylPolynomial._trusted(out)


def commutator(a: WeylPolynomial, b: WeylPolynomial) -> WeylPolynomial:
    return mul(a, b) - mul(b, a)


def anticommutator(a: WeylPolynomial, b: WeylPolynomial) -> WeylPolynomial:
    return mul(a, b) + mul(b, a)


def deriv(a: WeylPolynomial, which: str = "X") -> WeylPolynomial:
    """Formal partial derivative of the normal-ordered form, ``which`` in {"X", "P"}."""
    if which not in ("X", "P"):
        raise ValueError(f"axis must be 'X' or 'P', got {which!r}")
    out: dict = {}
    for (xp, pp), c in a._terms.items():
        if which == "X" and xp:
            _accumulate(out, (xp - 1, pp), c * xp)
        elif which == "P" and pp:
            _accumulate(out, (xp, pp - 1), c * pp)
    return WeylPolynomial._trusted(out)


def _d_step(f: WeylPolynomial) -> WeylPolynomial:
    return commutator(f, P).scale(_MINUS_I_OVER_HBAR)


def iterated_commutator(f: WeylPolynomial, n: int) -> WeylPolynomial:
    """Apply ``g -> (-i/hbar)[g, P]`` to ``f`` exactly ``n`` times."""
    if n < 0:
        raise ValueError("n must be non-negative")
    for _ in range(n):
        if not f:
            break
        f = _d_step(f)
    return f


def conjugate_series(f: WeylPolynomial, a, order: int) -> WeylPolynomial:
    """Truncated ``sum_{n<=order} a^n/n! (-i/hbar [., P])^n f``."""
    if order < 0:
        raise ValueError("order must be non-negative")
    a = GaussianRational.coerce(a)
    total = f
    term = f
    a_pow = _GR_ONE
    for n in range(1, order + 1):
        term = _d_step(term)
        if not term:
            break
        a_pow = a_pow * a
        total = total + term.scale(a_pow * Fraction(1, factorial(n)))
    return total


def taylor_shift(f: WeylPolynomial, a) -> WeylPolynomial:
    """``F(X + a)`` for ``F`` a polynomial in X only, by binomial expansion."""
    if not f.is_x_only():
        raise PDependenceError("taylor_shift is defined only for functions of X")
    a = GaussianRational.coerce(a)
    out: dict = {}
    for (n, _), c in f._terms.items():
        a_pow = _GR_ONE
        # X^n -> sum_k C(n, k) a^(n-k) X^k
        for j in range(n + 1):
            k = n - j
            term = c * (a_pow * comb(n, k))
            if term:
                _accumulate(out, (k, 0), term)
            a_pow = a_pow * a
    return WeylPolynomial._trusted(out)


def _random_rational(rng: random.Random, max_num: int, max_den: int) -> Fraction:
    return Fraction(rng.randint(-max_num, max_num), rng.randint(1, max_den))


def random_polynomial(
    rng: random.Random,
    max_degree: int = 5,
    *,
    x_only: bool = False,
    n_terms: int | None = None,
    complex_coeffs: bool = True,
    hbar_range: Tuple[int, int] = (0, 0),
    max_num: int = 9,
    max_den: int = 6,
) -> WeylPolynomial:
    """Draw a random polynomial with small rational coefficients.

    Total degree ``xpow + ppow`` stays at most ``max_degree``.
    """
    if n_terms is None:
        n_terms = rng.randint(1, max_degree + 2)
    terms: dict = {}
    for _ in range(n_terms):
        if x_only:
            mono = (rng.randint(0, max_degree), 0)
        else:
            xp = rng.randint(0, max_degree)
            mono = (xp, rng.randint(0, max_degree - xp))
        re = _random_rational(rng, max_num, max_den)
        im = _random_rational(rng, max_num, max_den) if complex_coeffs else 0
        k = rng.randint(*hbar_range)
        coeff = HbarLaurent.hbar_power(k, GaussianRational(re, im))
        terms[mono] = terms.get(mono, HbarLaurent()) + coeff
    return WeylPolynomial(terms)

import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from weylkin.algebra import (
    HBAR,
    I,
    ONE,
    P,
    X,
    ZERO,
    GaussianRational,
    HbarLaurent,
    PDependenceError,
    WeylPolynomial,
    anticommutator,
    commutator,
    conjugate_series,
    deriv,
    iterated_commutator,
    mul,
    random_polynomial,
    reorder,
    taylor_shift,
)
from weylkin.representations import build_fock

from oracles import closed_form_reorder, word_normal_order

IH = I * HBAR


def from_table(table):
    return WeylPolynomial({
        mono: HbarLaurent({k: GaussianRational(re, im) for k, (re, im) in coeff.items()})
        for mono, coeff in table.items()
    })


def poly_seeds():
    return st.integers(min_value=0, max_value=2**32 - 1)


# --- scalars ---------------------------------------------------------------


def test_gaussian_rational_arithmetic_is_exact():
    a = GaussianRational(Fraction(1, 3), 2)
    b = GaussianRational(-1, Fraction(1, 2))
    assert a * b == GaussianRational(Fraction(-1, 3) - 1, Fraction(1, 6) - 2)
    assert (a / b) * b == a
    assert a - a == 0
    assert GaussianRational(0, 1) ** 2 == -1
    assert GaussianRational(Fraction(2, 4)).re == Fraction(1, 2)


def test_gaussian_rational_rejects_floats():
    with pytest.raises(TypeError):
        GaussianRational.coerce(1.5j)


def test_laurent_drops_zero_coefficients_and_allows_negative_powers():
    h = HbarLaurent.hbar_power(-2, 3) + HbarLaurent.hbar_power(1, 1)
    assert set(h) == {-2, 1}
    assert not (h - h)
    assert h * HbarLaurent.hbar_power(2) == HbarLaurent({0: 3, 3: 1})


def test_values_are_immutable():
    with pytest.raises(AttributeError):
        X.foo = 1
    with pytest.raises(TypeError):
        X.terms[(0, 0)] = HbarLaurent.constant(1)


# --- mul ---------------------------------------------------------------------


def test_px_rewrites_to_xp_minus_i_hbar():
    assert P * X == X * P - IH


def test_one_is_identity():
    f = X ** 2 * P + HBAR * P ** 3 - 7
    assert ONE * f == f
    assert f * ONE == f


def test_mul_associativity_hand_example():
    expected = X ** 2 * P - (IH * X).scale(2)
    assert (P * X) * X == expected
    assert P * (X * X) == expected


@pytest.mark.parametrize("n,m", [(1, 1), (2, 3), (4, 4), (5, 2), (0, 3), (6, 0)])
def test_reorder_matches_closed_form(n, m):
    got = WeylPolynomial(dict(reorder(n, m)))
    assert got == from_table(closed_form_reorder(n, m))


@pytest.mark.parametrize("word", ["PX", "PPX", "PXPX", "PPXXX", "XPPXP", "PPPXXXX"])
def test_mul_agrees_with_string_rewriting(word):
    oracle = from_table(word_normal_order({word: {0: (Fraction(1), Fraction(0))}}))
    product = ONE
    for ch in word:
        product = product * (X if ch == "X" else P)
    assert product == oracle


def test_mul_agrees_with_fock_matrices_on_low_block():
    # truncation only spoils rows and columns near the top of the ladder
    rng = random.Random(7)
    rep = build_fock(40, 1.0)

    def to_matrix(f):
        out = np.zeros((40, 40), dtype=complex)
        for (xp, pp), c in f.items():
            scalar = sum(complex(v) for v in c.coeffs.values())  # hbar = 1
            out += scalar * np.linalg.matrix_power(rep.X, xp) @ np.linalg.matrix_power(rep.P, pp)
        return out

    for _ in range(5):
        f = random_polynomial(rng, 3)
        g = random_polynomial(rng, 3)
        direct = to_matrix(f) @ to_matrix(g)
        assert np.allclose(to_matrix(mul(f, g))[:20, :20], direct[:20, :20], atol=1e-8)


# --- commutators and derivatives ------------------------------------------


def test_commutator_examples():
    assert commutator(X, P) == IH
    assert commutator(X, X) == ZERO
    assert commutator(X ** 3, P) == (IH * X ** 2).scale(3)


def test_anticommutator_examples():
    assert anticommutator(X, P) == (X * P).scale(2) - IH
    assert anticommutator(X, ONE) == X.scale(2)
    assert anticommutator(X ** 2, P) == (X ** 2 * P).scale(2) - (IH * X).scale(2)


def test_deriv_examples():
    assert deriv(X ** 3, "X") == (X ** 2).scale(3)
    assert deriv(X ** 2 * P, "X") == (X * P).scale(2)
    assert deriv(X * P ** 2, "P") == (X * P).scale(2)
    with pytest.raises(ValueError):
        deriv(X, "Q")


def test_iterated_commutator_examples():
    assert iterated_commutator(X ** 3, 2) == X.scale(6)
    f = X ** 2 * P + HBAR
    assert iterated_commutator(f, 0) == f
    assert iterated_commutator(X ** 4, 4) == ONE.scale(24)


def test_iterated_commutator_passes_through_negative_hbar_powers():
    # one step of (-i/hbar)[., P] on X P^2 carries no hbar at all
    f = X * P ** 2
    assert iterated_commutator(f, 1) == P ** 2


def test_conjugate_series_examples():
    a = GaussianRational(Fraction(3, 7), 2)
    assert conjugate_series(X ** 2, a, 2) == X ** 2 + X.scale(2 * a) + ONE.scale(a * a)
    f = X ** 3 * P - HBAR * X
    assert conjugate_series(f, a, 0) == f
    assert conjugate_series(X ** 3, 1, 3) == X ** 3 + (X ** 2).scale(3) + X.scale(3) + 1


def test_taylor_shift_examples():
    assert taylor_shift(X ** 3, 1) == X ** 3 + (X ** 2).scale(3) + X.scale(3) + 1
    f = X ** 5 - X.scale(Fraction(2, 3))
    assert taylor_shift(f, 0) == f
    assert taylor_shift(X ** 2, Fraction(-1, 2)) == X ** 2 - X + Fraction(1, 4)
    with pytest.raises(PDependenceError):
        taylor_shift(X * P, 1)


def test_taylor_shift_agrees_with_binomial_oracle():
    from math import comb

    a = Fraction(-5, 3)
    for n in range(9):
        expected = sum(
            ((X ** k).scale(comb(n, k) * a ** (n - k)) for k in range(n + 1)), ZERO
        )
        assert taylor_shift(X ** n, a) == expected


# --- properties --------------------------------------------------------------


@settings(max_examples=40, deadline=None)
@given(poly_seeds())
def test_ring_laws(seed):
    rng = random.Random(seed)
    f, g, h = (random_polynomial(rng, 5, hbar_range=(-1, 1)) for _ in range(3))
    assert (f * g) * h == f * (g * h)
    assert f * (g + h) == f * g + f * h
    assert (f + g) * h == f * h + g * h
    assert ONE * f == f == f * ONE


@settings(max_examples=100, deadline=None)
@given(poly_seeds())
def test_jacobi_identity(seed):
    rng = random.Random(seed)
    f, g, h = (random_polynomial(rng, 5) for _ in range(3))
    total = (
        commutator(f, commutator(g, h))
        + commutator(g, commutator(h, f))
        + commutator(h, commutator(f, g))
    )
    assert total.is_zero()


@settings(max_examples=60, deadline=None)
@given(poly_seeds())
def test_commutator_with_p_is_i_hbar_derivative(seed):
    f = random_polynomial(random.Random(seed), 12, x_only=True)
    assert commutator(f, P) == IH * deriv(f, "X")


@settings(max_examples=40, deadline=None)
@given(poly_seeds(), st.integers(min_value=0, max_value=6))
def test_iterated_commutator_is_nth_derivative(seed, n):
    f = random_polynomial(random.Random(seed), 12, x_only=True)
    d = f
    for _ in range(n):
        d = deriv(d, "X")
    assert iterated_commutator(f, n) == d


@settings(max_examples=40, deadline=None)
@given(poly_seeds(), st.integers(0, 3))
def test_conjugate_series_equals_shift_once_order_covers_degree(seed, extra):
    rng = random.Random(seed)
    f = random_polynomial(rng, 8, x_only=True)
    a = GaussianRational(Fraction(rng.randint(-9, 9), rng.randint(1, 7)),
                         Fraction(rng.randint(-9, 9), rng.randint(1, 7)))
    assert conjugate_series(f, a, f.x_degree + extra) == taylor_shift(f, a)


def test_conjugate_series_below_degree_is_a_truncation():
    f = X ** 4
    assert conjugate_series(f, 1, 3) == taylor_shift(f, 1) - 1


@settings(max_examples=30, deadline=None)
@given(poly_seeds())
def test_commutator_is_antisymmetric_and_bilinear(seed):
    rng = random.Random(seed)
    f, g, h = (random_polynomial(rng, 4) for _ in range(3))
    assert commutator(f, g) == -commutator(g, f)
    assert commutator(f + h, g) == commutator(f, g) + commutator(h, g)


def test_high_order_towers_stay_exact():
    # 30! overflows 64-bit integers
    f = X ** 30
    assert iterated_commutator(f, 30) == ONE.scale(265252859812191058636308480000000)
    assert commutator(X ** 30, P) == (IH * X ** 29).scale(30)

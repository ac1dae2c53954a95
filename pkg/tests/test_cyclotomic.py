"""Unit tests for exact cyclotomic arithmetic."""

from fractions import Fraction

import pytest

from stickelgraph.cyclotomic import CyclotomicNumber, CyclotomicPolynomial, evaluate_at_root
from stickelgraph.polynomials import IntPolynomial


def test_normal_form():
    """Test reduction modulo Φ_n and of the denominator."""
    zeta = CyclotomicNumber.root_of_unity(4, 1)
    assert zeta * zeta == CyclotomicNumber.from_int(4, -1)
    assert CyclotomicNumber(4, (2, 4), 6) == CyclotomicNumber(4, (1, 2), 3)
    assert CyclotomicNumber(3, (1,), -2) == CyclotomicNumber(3, (-1,), 2)
    # 1 + ζ_3 + ζ_3^2 = 0
    assert CyclotomicNumber(3, (1, 1, 1)).is_zero

    with pytest.raises(ValueError):
        CyclotomicNumber(3, (1,), 0)


def test_rational_values():
    """Test recognition and extraction of rationals."""
    half = CyclotomicNumber.from_fraction(6, Fraction(1, 2))
    assert half.is_rational
    assert half.to_fraction() == Fraction(1, 2)
    assert not CyclotomicNumber.root_of_unity(6, 1).is_rational
    assert CyclotomicNumber.zero(5).to_fraction() == 0

    with pytest.raises(ValueError):
        CyclotomicNumber.root_of_unity(6, 1).to_fraction()


def test_arithmetic_with_rationals():
    """Test mixed arithmetic with ints and fractions."""
    zeta = CyclotomicNumber.root_of_unity(4, 1)
    assert (zeta + 1) - 1 == zeta
    assert 2 * zeta == zeta + zeta
    assert (zeta * 3) / 3 == zeta
    assert (1 - zeta) * (1 + zeta) == CyclotomicNumber.from_int(4, 2)
    assert zeta ** 4 == CyclotomicNumber.one(4)
    assert zeta.degree == 2


def test_field_mismatch():
    """Test that numbers of different fields do not mix."""
    with pytest.raises(ValueError):
        CyclotomicNumber.one(3) + CyclotomicNumber.one(4)


def test_evaluate_at_root():
    """Test polynomial evaluation at powers of ζ."""
    # 1 + 3x + 4x^2 + 2x^3 at x = i is -3 + i, at x = -1 is 0
    f = IntPolynomial.of(1, 3, 4, 2)
    assert evaluate_at_root(f, 4, 1) == CyclotomicNumber(4, (-3, 1))
    assert evaluate_at_root(f, 4, 2).is_zero
    assert evaluate_at_root(f, 4, 0) == CyclotomicNumber.from_int(4, 10)


def test_cyclotomic_polynomial():
    """Test products, values and vanishing order at u = 1."""
    one = CyclotomicPolynomial.one(3)
    zeta = CyclotomicNumber.root_of_unity(3, 1)
    linear = CyclotomicPolynomial(3, (CyclotomicNumber.one(3), -zeta))
    assert (linear * one) == linear
    assert linear.evaluate_at_one() == 1 - zeta
    assert linear.order_at_one() == 0

    # (1 - u)^2
    square = CyclotomicPolynomial.from_int_poly(3, IntPolynomial.of(1, -2, 1))
    assert square.order_at_one() == 2
    assert (square - square).coefficients == ()

    with pytest.raises(ValueError):
        CyclotomicPolynomial(3, ()).order_at_one()

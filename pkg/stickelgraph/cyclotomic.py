"""Exact arithmetic in cyclotomic fields Q(ζ_n)."""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, gcd
from typing import List, Sequence, Tuple, Union

from sympy import ZZ, cyclotomic_poly, totient
from sympy.polys.densearith import dup_add, dup_mul, dup_rem
from sympy.polys.densebasic import dup_strip

from .polynomials import IntPolynomial


@lru_cache(maxsize=None)
def _cyclotomic_modulus(n: int) -> Tuple:
    """Φ_n as a dense list, highest degree first."""
    return tuple(ZZ(int(c)) for c in cyclotomic_poly(n, polys=True).all_coeffs())


def _to_dense(ascending: Sequence[int]) -> List:
    return dup_strip([ZZ(int(c)) for c in reversed(ascending)])


def _from_dense(dense: Sequence) -> Tuple[int, ...]:
    return tuple(int(c) for c in reversed(dense))


def _reduce(dense: List, n: int) -> List:
    return dup_rem(dense, list(_cyclotomic_modulus(n)), ZZ)


@dataclass(frozen=True)
class CyclotomicNumber:
    """Element numerator(ζ_n)/denominator of Q(ζ_n).

    The numerator is reduced modulo Φ_n and shares no common factor with the
    positive denominator.
    """
    order: int
    numerator: Tuple[int, ...]
    denominator: int = 1

    def __post_init__(self):
        if self.order < 1 or self.denominator == 0:
            raise ValueError("Invalid cyclotomic number")
        num = _from_dense(_reduce(_to_dense(self.numerator), self.order))
        den = self.denominator
        if den < 0:
            num, den = tuple(-c for c in num), -den
        common = gcd(den, *num) if num else den
        object.__setattr__(self, 'numerator', tuple(c // common for c in num))
        object.__setattr__(self, 'denominator', den // common)

    @classmethod
    def from_int(cls, order: int, value: int) -> 'CyclotomicNumber':
        return cls(order, (value,))

    @classmethod
    def from_fraction(cls, order: int, value: Fraction) -> 'CyclotomicNumber':
        return cls(order, (value.numerator,), value.denominator)

    @classmethod
    def root_of_unity(cls, order: int, power: int) -> 'CyclotomicNumber':
        """ζ_order ** power."""
        power %= order
        return cls(order, (0,) * power + (1,))

    @classmethod
    def zero(cls, order: int) -> 'CyclotomicNumber':
        return cls(order, ())

    @classmethod
    def one(cls, order: int) -> 'CyclotomicNumber':
        return cls(order, (1,))

    @property
    def degree(self) -> int:
        """Degree φ(n) of the field."""
        return int(totient(self.order))

    @property
    def is_zero(self) -> bool:
        return not self.numerator

    @property
    def is_rational(self) -> bool:
        return len(self.numerator) <= 1

    def to_fraction(self) -> Fraction:
        if not self.is_rational:
            raise ValueError(f"{self} is not rational")
        value = self.numerator[0] if self.numerator else 0
        return Fraction(value, self.denominator)

    def _coerce(self, other: Union['CyclotomicNumber', int, Fraction]) -> 'CyclotomicNumber':
        if isinstance(other, CyclotomicNumber):
            if other.order != self.order:
                raise ValueError(f"Field mismatch: Q(ζ_{self.order}) vs Q(ζ_{other.order})")
            return other
        return CyclotomicNumber.from_fraction(self.order, Fraction(other))

    def __add__(self, other) -> 'CyclotomicNumber':
        other = self._coerce(other)
        left = [c * other.denominator for c in self.numerator]
        right = [c * self.denominator for c in other.numerator]
        num = dup_add(_to_dense(left), _to_dense(right), ZZ)
        return CyclotomicNumber(self.order, _from_dense(num), self.denominator * other.denominator)

    __radd__ = __add__

    def __neg__(self) -> 'CyclotomicNumber':
        return CyclotomicNumber(self.order, tuple(-c for c in self.numerator), self.denominator)

    def __sub__(self, other) -> 'CyclotomicNumber':
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> 'CyclotomicNumber':
        return self._coerce(other) - self

    def __mul__(self, other) -> 'CyclotomicNumber':
        other = self._coerce(other)
        num = _reduce(dup_mul(_to_dense(self.numerator), _to_dense(other.numerator), ZZ), self.order)
        return CyclotomicNumber(self.order, _from_dense(num), self.denominator * other.denominator)

    __rmul__ = __mul__

    def __truediv__(self, other: Union[int, Fraction]) -> 'CyclotomicNumber':
        """Division by a nonzero rational."""
        value = Fraction(other)
        return self * CyclotomicNumber.from_fraction(self.order, 1 / value)

    def __pow__(self, exponent: int) -> 'CyclotomicNumber':
        result = CyclotomicNumber.one(self.order)
        for _ in range(exponent):
            result = result * self
        return result

    def __str__(self) -> str:
        terms = [f"{c}ζ^{k}" if k else f"{c}" for k, c in enumerate(self.numerator) if c]
        body = ' + '.join(terms) or '0'
        return body if self.denominator == 1 else f"({body})/{self.denominator}"


def evaluate_at_root(poly: IntPolynomial, order: int, power: int) -> CyclotomicNumber:
    """poly(ζ_order ** power)."""
    coeffs = [0] * order
    for k, c in enumerate(poly.coefficients):
        coeffs[(k * power) % order] += c
    return CyclotomicNumber(order, tuple(coeffs))


@dataclass(frozen=True)
class CyclotomicPolynomial:
    """Polynomial in u with CyclotomicNumber coefficients, ascending degree."""
    order: int
    coefficients: Tuple[CyclotomicNumber, ...]

    def __post_init__(self):
        coeffs = list(self.coefficients)
        while coeffs and coeffs[-1].is_zero:
            coeffs.pop()
        if any(c.order != self.order for c in coeffs):
            raise ValueError("Coefficient field mismatch")
        object.__setattr__(self, 'coefficients', tuple(coeffs))

    @classmethod
    def from_int_poly(cls, order: int, poly: IntPolynomial) -> 'CyclotomicPolynomial':
        return cls(order, tuple(CyclotomicNumber.from_int(order, c) for c in poly.coefficients))

    @classmethod
    def one(cls, order: int) -> 'CyclotomicPolynomial':
        return cls(order, (CyclotomicNumber.one(order),))

    def coefficient(self, k: int) -> CyclotomicNumber:
        if 0 <= k < len(self.coefficients):
            return self.coefficients[k]
        return CyclotomicNumber.zero(self.order)

    def __mul__(self, other: 'CyclotomicPolynomial') -> 'CyclotomicPolynomial':
        if not self.coefficients or not other.coefficients:
            return CyclotomicPolynomial(self.order, ())
        out = [CyclotomicNumber.zero(self.order)] * (len(self.coefficients) + len(other.coefficients) - 1)
        for i, a in enumerate(self.coefficients):
            for j, b in enumerate(other.coefficients):
                out[i + j] = out[i + j] + a * b
        return CyclotomicPolynomial(self.order, tuple(out))

    def __sub__(self, other: 'CyclotomicPolynomial') -> 'CyclotomicPolynomial':
        n = max(len(self.coefficients), len(other.coefficients))
        return CyclotomicPolynomial(
            self.order, tuple(self.coefficient(k) - other.coefficient(k) for k in range(n)))

    def evaluate_at_one(self) -> CyclotomicNumber:
        total = CyclotomicNumber.zero(self.order)
        for c in self.coefficients:
            total = total + c
        return total

    def order_at_one(self) -> int:
        """Vanishing order at u = 1, from the coefficients of p(1 + t)."""
        if not self.coefficients:
            raise ValueError("Zero polynomial vanishes to infinite order")
        for k in range(len(self.coefficients)):
            shifted = CyclotomicNumber.zero(self.order)
            for i in range(k, len(self.coefficients)):
                shifted = shifted + self.coefficients[i] * comb(i, k)
            if not shifted.is_zero:
                return k
        raise ArithmeticError("nonzero polynomial with vanishing Taylor expansion")

"""Integer polynomials, reversed characteristic polynomials and Taylor data at u = 1."""

import logging
from dataclasses import dataclass
from math import factorial
from typing import Optional, Tuple

from sympy import Poly, Symbol, ZZ
from sympy.polys.polyerrors import ExactQuotientFailed

from .config import DEFAULT_SETTINGS, Settings
from .errors import ConsistencyError, IntegralityError, PreconditionError
from .linalg import IntMatrix

logger = logging.getLogger(__name__)

_U = Symbol('u')


@dataclass(frozen=True)
class IntPolynomial:
    """Polynomial with integer coefficients in ascending degree."""
    coefficients: Tuple[int, ...]

    def __post_init__(self):
        coeffs = [int(c) for c in self.coefficients]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        object.__setattr__(self, 'coefficients', tuple(coeffs))

    @classmethod
    def of(cls, *coefficients: int) -> 'IntPolynomial':
        return cls(tuple(coefficients))

    @classmethod
    def from_poly(cls, poly: Poly) -> 'IntPolynomial':
        if poly.is_zero:
            return cls(())
        return cls(tuple(int(c) for c in reversed(poly.all_coeffs())))

    def to_poly(self) -> Poly:
        return Poly(list(reversed(self.coefficients)) or [0], _U, domain=ZZ)

    @property
    def is_zero(self) -> bool:
        return not self.coefficients

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coefficients) - 1

    def coefficient(self, k: int) -> int:
        return self.coefficients[k] if 0 <= k < len(self.coefficients) else 0

    def __add__(self, other: 'IntPolynomial') -> 'IntPolynomial':
        n = max(len(self.coefficients), len(other.coefficients))
        return IntPolynomial(tuple(self.coefficient(k) + other.coefficient(k) for k in range(n)))

    def __neg__(self) -> 'IntPolynomial':
        return IntPolynomial(tuple(-c for c in self.coefficients))

    def __sub__(self, other: 'IntPolynomial') -> 'IntPolynomial':
        return self + (-other)

    def __mul__(self, other: 'IntPolynomial') -> 'IntPolynomial':
        return IntPolynomial.from_poly(self.to_poly() * other.to_poly())

    def __call__(self, x: int) -> int:
        return self.evaluate(x)

    def evaluate(self, x: int) -> int:
        value = 0
        for c in reversed(self.coefficients):
            value = value * x + c
        return value

    def shift(self, a: int) -> 'IntPolynomial':
        """Return p(u + a)."""
        return IntPolynomial.from_poly(self.to_poly().shift(a))

    def exact_div(self, other: 'IntPolynomial') -> 'IntPolynomial':
        """Exact quotient in Z[u].

        Raises:
            IntegralityError: If other does not divide self
        """
        try:
            return IntPolynomial.from_poly(self.to_poly().exquo(other.to_poly()))
        except ExactQuotientFailed:
            raise IntegralityError(f"{other} does not divide {self}")

    def gcd(self, other: 'IntPolynomial') -> 'IntPolynomial':
        return IntPolynomial.from_poly(self.to_poly().gcd(other.to_poly()))

    def resultant(self, other: 'IntPolynomial') -> int:
        """Resultant Res(self, other) via the subresultant sequence."""
        if self.is_zero or other.is_zero:
            return 0
        if self.degree == 0:
            return self.coefficients[0] ** max(other.degree, 0)
        if other.degree == 0:
            return other.coefficients[0] ** self.degree
        return int(self.to_poly().resultant(other.to_poly()))

    def __str__(self) -> str:
        if self.is_zero:
            return '0'
        terms = []
        for k, c in enumerate(self.coefficients):
            if c:
                terms.append(f"{c}" if k == 0 else f"{c}u^{k}")
        return ' + '.join(terms)


def _interpolated_char_poly(a: IntMatrix) -> IntPolynomial:
    """det(I - a·u) from its values at u = 0..n by Newton forward differences."""
    n = a.rows
    rows = a.to_rows()
    values = []
    for u0 in range(n + 1):
        shifted = [[(1 if i == j else 0) - u0 * rows[i][j] for j in range(n)] for i in range(n)]
        values.append(IntMatrix.from_rows(shifted).determinant())
    deltas = []
    while values:
        deltas.append(values[0])
        values = [b - c for c, b in zip(values, values[1:])]
    # Σ Δ^k y_0 · u(u-1)...(u-k+1)/k!, scaled by n! to stay in Z[u]
    scale = factorial(n)
    total = Poly(0, _U, domain=ZZ)
    falling = Poly(1, _U, domain=ZZ)
    for k, delta in enumerate(deltas):
        total += falling.mul_ground(delta * (scale // factorial(k)))
        falling *= Poly(_U - k, _U, domain=ZZ)
    try:
        poly = total.exquo_ground(scale)
    except ExactQuotientFailed:
        raise IntegralityError("Interpolated characteristic polynomial is not integral")
    logger.debug("Interpolated reversed characteristic polynomial of size %d", n)
    return IntPolynomial.from_poly(poly)


def reversed_char_poly(a: IntMatrix, method: str = 'auto',
                       settings: Optional[Settings] = None) -> IntPolynomial:
    """Compute det(I - a·u) exactly.

    'berkowitz' reverses the division-free characteristic polynomial of a;
    'interpolation' evaluates n + 1 determinants and interpolates. 'auto' uses
    the first and, up to ``interpolation_check_size``, checks it against the second.

    Args:
        a: Square integer matrix
        method: 'berkowitz', 'interpolation' or 'auto'
        settings: Limits; interpolation_check_size bounds the cross-check under 'auto'
    Returns:
        IntPolynomial with constant term 1
    Raises:
        ValueError: If the matrix is not square or the method is unknown
        ConsistencyError: If the two methods disagree under 'auto'
    """
    settings = settings or DEFAULT_SETTINGS
    if not a.is_square:
        raise ValueError(f"reversed_char_poly needs a square matrix, got {a.shape}")
    n = a.rows
    if n == 0:
        return IntPolynomial.of(1)
    if method == 'interpolation':
        return _interpolated_char_poly(a)
    if method not in ('berkowitz', 'auto'):
        raise ValueError(f"Unknown method '{method}'")
    # charpoly gives det(xI - a) = x^n + c_1 x^(n-1) + ... ; reversing yields det(I - a u)
    g = IntPolynomial(tuple(int(c) for c in a.to_domain_matrix().charpoly()))
    if method == 'auto' and n <= settings.interpolation_check_size:
        check = _interpolated_char_poly(a)
        if check != g:
            raise ConsistencyError(f"Characteristic polynomial {g} disagrees with interpolation {check}")
    return g


def taylor_at_one(p: IntPolynomial) -> Tuple[int, int, IntPolynomial]:
    """Expand p at u = 1.

    Args:
        p: Nonzero polynomial
    Returns:
        (order, special_value, shifted) where shifted(t) = p(1 + t), order is the
        vanishing order at u = 1 and special_value its first nonzero coefficient
    Raises:
        PreconditionError: For the zero polynomial
    """
    if p.is_zero:
        raise PreconditionError("taylor_at_one of the zero polynomial")
    shifted = p.shift(1)
    order = next(k for k, c in enumerate(shifted.coefficients) if c != 0)
    return order, shifted.coefficients[order], shifted


def geometric_sum(length: int) -> IntPolynomial:
    """1 + x + ... + x^(length-1)."""
    return IntPolynomial((1,) * max(length, 0))


def binomial_poly(degree: int, constant: int) -> IntPolynomial:
    """x^degree + constant."""
    coeffs = [0] * (degree + 1)
    coeffs[0] += constant
    coeffs[degree] += 1
    return IntPolynomial(tuple(coeffs))

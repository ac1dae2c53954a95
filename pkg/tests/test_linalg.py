"""Unit tests for exact integer linear algebra."""

import random
from itertools import combinations
from math import gcd

import pytest

from stickelgraph.errors import IntegralityError, PreconditionError
from stickelgraph.linalg import (IntMatrix, Lattice, hermite_normal_form, image_lattice,
                                 invariant_factors, kernel_and_image_saturation, kernel_lattice,
                                 lattice_index, smith_normal_form)


def _assert_smith_form(m: IntMatrix):
    snf = smith_normal_form(m)
    assert snf.left_transform @ m @ snf.right_transform == snf.diagonal()
    assert abs(snf.left_transform.determinant()) == 1
    assert abs(snf.right_transform.determinant()) == 1
    factors = list(snf.invariant_factors)
    nonzero = [d for d in factors if d != 0]
    assert factors == nonzero + [0] * (len(factors) - len(nonzero))
    assert all(d > 0 for d in nonzero)
    assert all(b % a == 0 for a, b in zip(nonzero, nonzero[1:]))
    return snf


def test_from_rows_and_shape():
    """Test matrix construction and basic accessors."""
    m = IntMatrix.from_rows([[1, 2, 3], [4, 5, 6]])
    assert m.shape == (2, 3)
    assert not m.is_square
    assert m[1, 2] == 6
    assert m.transpose().to_rows() == [[1, 4], [2, 5], [3, 6]]
    assert IntMatrix.from_rows([], cols=3).shape == (0, 3)

    with pytest.raises(ValueError):
        IntMatrix.from_rows([[1, 2], [3]])


def test_arithmetic_and_apply():
    """Test products, sums and matrix-vector application."""
    a = IntMatrix.from_rows([[1, 2], [3, 4]])
    b = IntMatrix.identity(2)
    assert a @ b == a
    assert (a - a) == IntMatrix.zeros(2, 2)
    assert (a + b).to_rows() == [[2, 2], [3, 5]]
    assert a.apply([1, -1]) == (-1, -1)

    with pytest.raises(ValueError):
        a.apply([1, 2, 3])


def test_determinant_and_rank():
    """Test exact determinants, including the empty matrix."""
    assert IntMatrix.from_rows([[2, 1], [1, 2]]).determinant() == 3
    assert IntMatrix.zeros(0, 0).determinant() == 1
    assert IntMatrix.from_rows([[1, 1], [1, 1]]).rank() == 1

    # Entries beyond machine integers stay exact
    big = 10 ** 30
    assert IntMatrix.from_rows([[big, 1], [1, big]]).determinant() == big * big - 1


def test_unimodular_inverse():
    """Test inverses of unimodular matrices and rejection of the rest."""
    u = IntMatrix.from_rows([[2, 1], [1, 1]])
    assert u @ u.unimodular_inverse() == IntMatrix.identity(2)

    with pytest.raises(IntegralityError):
        IntMatrix.from_rows([[2, 0], [0, 1]]).unimodular_inverse()


def test_smith_normal_form_known_values():
    """Test invariant factors of hand-computed matrices."""
    assert _assert_smith_form(IntMatrix.from_rows([[2, 4], [6, 8]])).invariant_factors == (2, 4)
    assert _assert_smith_form(IntMatrix.from_rows([[-1, -2], [-2, -1]])).invariant_factors == (1, 3)
    assert _assert_smith_form(IntMatrix.from_rows([[-1, -1], [-1, -1]])).invariant_factors == (1, 0)
    assert invariant_factors(IntMatrix.from_rows([[0, 0], [0, 0]])) == (0, 0)


def test_smith_normal_form_rectangular():
    """Test non-square matrices."""
    snf = _assert_smith_form(IntMatrix.from_rows([[2, 0, 0], [0, 3, 0]]))
    assert snf.invariant_factors == (1, 6)
    snf = _assert_smith_form(IntMatrix.from_rows([[4], [6]]))
    assert snf.invariant_factors == (2,)


def test_smith_normal_form_random():
    """Test the Smith form contract on random small matrices."""
    rng = random.Random(20240611)
    for _ in range(300):
        rows, cols = rng.randint(1, 4), rng.randint(1, 4)
        m = IntMatrix.from_rows([[rng.randint(-6, 6) for _ in range(cols)] for _ in range(rows)])
        snf = _assert_smith_form(m)
        assert snf.invariant_factors == invariant_factors(m)
        if m.is_square:
            product = 1
            for d in snf.invariant_factors:
                product *= d
            assert product == abs(m.determinant())


def test_hermite_normal_form():
    """Test the canonical echelon basis."""
    assert hermite_normal_form([[2, 0], [0, 3], [2, 3]], 2) == [(2, 0), (0, 3)]
    assert hermite_normal_form([[4, 6], [2, 3]], 2) == [(2, 3)]
    assert hermite_normal_form([], 3) == []
    # entries above a pivot are reduced into [0, pivot)
    basis = hermite_normal_form([[1, 5], [0, 3]], 2)
    assert basis == [(1, 2), (0, 3)]

    with pytest.raises(ValueError):
        hermite_normal_form([[1, 2, 3]], 2)


def test_lattice_membership():
    """Test coordinates and containment."""
    lattice = Lattice.span([[2, 0], [0, 3]], 2)
    assert lattice.rank == 2
    assert (4, 9) in lattice
    assert (1, 0) not in lattice
    assert lattice.coordinates((4, 9)) == (2, 3)
    assert Lattice.span([[1, 1], [2, 2]], 2).rank == 1


def test_kernel_and_image():
    """Test integer kernels, column-span images and saturation."""
    kernel = kernel_lattice(IntMatrix.from_rows([[1, 1]]))
    assert kernel.rank == 1
    assert (1, -1) in kernel

    m = IntMatrix.from_rows([[2, 0], [0, 0]])
    assert image_lattice(m).vectors() == [(2, 0)]
    _, saturated = kernel_and_image_saturation(m)
    assert saturated.vectors() == [(1, 0)]

    # the image is the column span
    assert (1, 0) in image_lattice(IntMatrix.from_rows([[1, 0], [0, 0]]))
    assert (0, 1) not in image_lattice(IntMatrix.from_rows([[1, 0], [0, 0]]))


def test_lattice_index():
    """Test indices of full-rank sublattices and the error paths."""
    assert lattice_index(Lattice.ambient(2), Lattice.span([[2, 0], [0, 3]], 2)) == 6
    assert lattice_index(Lattice.span([[1, 1]], 2), Lattice.span([[2, 2]], 2)) == 2
    assert lattice_index(Lattice.ambient(0), Lattice.ambient(0)) == 1

    with pytest.raises(PreconditionError):
        lattice_index(Lattice.ambient(2), Lattice.span([[1, 0]], 2))
    with pytest.raises(PreconditionError):
        lattice_index(Lattice.span([[2, 0]], 2), Lattice.span([[1, 0]], 2))
    with pytest.raises(PreconditionError):
        lattice_index(Lattice.ambient(2), Lattice.ambient(3))


def _minor_gcd(m: IntMatrix, k: int) -> int:
    rows = m.to_rows()
    g = 0
    for r in combinations(range(m.rows), k):
        for c in combinations(range(m.cols), k):
            g = gcd(g, IntMatrix.from_rows([[rows[i][j] for j in c] for i in r]).determinant())
    return g


@pytest.mark.slow
def test_smith_normal_form_random_large():
    """Test the Smith form contract on 1000 matrices up to 12 x 12 with entries in [-50, 50]."""
    rng = random.Random(1000)
    for _ in range(1000):
        rows, cols = rng.randint(1, 12), rng.randint(1, 12)
        m = IntMatrix.from_rows([[rng.randint(-50, 50) for _ in range(cols)] for _ in range(rows)])
        snf = _assert_smith_form(m)
        assert snf.invariant_factors == invariant_factors(m)


def test_invariant_factors_match_determinantal_ideals():
    """Test d_1···d_k = gcd of the k x k minors on matrices up to 5 x 5."""
    rng = random.Random(5)
    for _ in range(80):
        rows, cols = rng.randint(1, 5), rng.randint(1, 5)
        m = IntMatrix.from_rows([[rng.randint(-50, 50) for _ in range(cols)] for _ in range(rows)])
        factors = invariant_factors(m)
        product = 1
        for k in range(1, min(rows, cols) + 1):
            product *= factors[k - 1]
            assert product == _minor_gcd(m, k)


def test_hermite_normal_form_random():
    """Test canonical shape, equal span and independence of the generator order."""
    rng = random.Random(31)
    for _ in range(100):
        n = rng.randint(1, 6)
        vectors = [[rng.randint(-9, 9) for _ in range(n)] for _ in range(rng.randint(1, 7))]
        basis = hermite_normal_form(vectors, n)
        pivots = [next(c for c, x in enumerate(row) if x) for row in basis]
        assert pivots == sorted(set(pivots))
        for r, (row, c) in enumerate(zip(basis, pivots)):
            assert row[c] > 0
            assert all(0 <= basis[i][c] < row[c] for i in range(r))
        lattice = Lattice.span(basis, n)
        assert all(tuple(v) in lattice for v in vectors)
        shuffled = list(vectors)
        rng.shuffle(shuffled)
        assert hermite_normal_form(shuffled, n) == basis
        assert len(basis) == IntMatrix.from_rows(vectors).rank()


def test_saturation_is_torsion_free():
    """Test that Z^n / saturated image has no torsion and contains the image with equal rank."""
    rng = random.Random(17)
    for _ in range(60):
        rows, cols = rng.randint(1, 6), rng.randint(1, 6)
        m = IntMatrix.from_rows([[rng.randint(-8, 8) for _ in range(cols)] for _ in range(rows)])
        _, saturated = kernel_and_image_saturation(m)
        image = image_lattice(m)
        assert saturated.rank == image.rank == m.rank()
        assert all(v in saturated for v in image.vectors())
        assert set(invariant_factors(saturated.basis)) <= {1}

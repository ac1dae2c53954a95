"""Exact integer linear algebra: matrices, Smith and Hermite normal forms, lattices."""

import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
from sympy import QQ, ZZ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.normalforms import hermite_normal_form as sympy_hnf

from .errors import IntegralityError, PreconditionError

logger = logging.getLogger(__name__)


def _object_zeros(rows: int, cols: int) -> np.ndarray:
    return np.zeros((rows, cols), dtype=object)


def _object_identity(n: int) -> np.ndarray:
    eye = _object_zeros(n, n)
    for i in range(n):
        eye[i, i] = 1
    return eye


@dataclass(frozen=True)
class IntMatrix:
    """Arbitrary-precision integer matrix stored row-major."""
    rows: int
    cols: int
    entries: Tuple[int, ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("Matrix dimensions must be nonnegative")
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"Expected {self.rows * self.cols} entries, got {len(self.entries)}")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: Optional[int] = None) -> 'IntMatrix':
        """Build a matrix from a list of rows.

        Args:
            rows: Row vectors of integers
            cols: Column count, required only when there are no rows
        Returns:
            IntMatrix instance
        """
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        if any(len(r) != cols for r in rows):
            raise ValueError("Ragged rows")
        return cls(len(rows), cols, tuple(int(x) for r in rows for x in r))

    @classmethod
    def from_numpy(cls, array: np.ndarray) -> 'IntMatrix':
        rows, cols = array.shape
        return cls(rows, cols, tuple(int(x) for x in array.reshape(-1)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> 'IntMatrix':
        return cls(rows, cols, (0,) * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> 'IntMatrix':
        return cls.from_numpy(_object_identity(n))

    @property
    def shape(self) -> Tuple[int, int]:
        return self.rows, self.cols

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __getitem__(self, index: Tuple[int, int]) -> int:
        i, j = index
        return self.entries[i * self.cols + j]

    def to_rows(self) -> List[List[int]]:
        return [list(self.entries[i * self.cols:(i + 1) * self.cols]) for i in range(self.rows)]

    def to_numpy(self) -> np.ndarray:
        array = _object_zeros(self.rows, self.cols)
        for i, row in enumerate(self.to_rows()):
            array[i, :] = row
        return array

    def to_domain_matrix(self, domain=ZZ) -> DomainMatrix:
        rows = [[domain(x) for x in row] for row in self.to_rows()]
        return DomainMatrix(rows, (self.rows, self.cols), domain)

    def transpose(self) -> 'IntMatrix':
        return IntMatrix.from_numpy(self.to_numpy().T)

    def __matmul__(self, other: 'IntMatrix') -> 'IntMatrix':
        if self.cols != other.rows:
            raise ValueError(f"Shape mismatch {self.shape} @ {other.shape}")
        product = _object_zeros(self.rows, other.cols)
        if self.cols:
            product = self.to_numpy().dot(other.to_numpy())
        return IntMatrix.from_numpy(product)

    def __add__(self, other: 'IntMatrix') -> 'IntMatrix':
        if self.shape != other.shape:
            raise ValueError(f"Shape mismatch {self.shape} + {other.shape}")
        return IntMatrix(self.rows, self.cols,
                         tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: 'IntMatrix') -> 'IntMatrix':
        return self + (-other)

    def __neg__(self) -> 'IntMatrix':
        return IntMatrix(self.rows, self.cols, tuple(-a for a in self.entries))

    def apply(self, vector: Sequence[int]) -> Tuple[int, ...]:
        """Return M·v for a column vector v."""
        if len(vector) != self.cols:
            raise ValueError("Vector length does not match column count")
        return tuple(sum(a * b for a, b in zip(row, vector)) for row in self.to_rows())

    def determinant(self) -> int:
        """Exact determinant by fraction-free elimination."""
        if not self.is_square:
            raise ValueError("Determinant of a non-square matrix")
        if self.rows == 0:
            return 1
        return int(self.to_domain_matrix().det())

    def rank(self) -> int:
        if self.rows == 0 or self.cols == 0:
            return 0
        return int(self.to_domain_matrix(QQ).rank())

    def unimodular_inverse(self) -> 'IntMatrix':
        """Exact inverse of a matrix with determinant ±1.

        Raises:
            IntegralityError: If the inverse has non-integral entries
        """
        if not self.is_square:
            raise ValueError("Inverse of a non-square matrix")
        if self.rows == 0:
            return self
        inverse = self.to_domain_matrix(QQ).inv().to_Matrix()
        if any(x.q != 1 for x in inverse):
            raise IntegralityError("Matrix is not unimodular")
        return IntMatrix(self.rows, self.cols, tuple(int(x) for x in inverse))

    def to_json(self) -> List[List[int]]:
        return self.to_rows()


@dataclass(frozen=True)
class SNFResult:
    """Smith normal form: left · M · right = diag(invariant_factors)."""
    invariant_factors: Tuple[int, ...]
    left_transform: IntMatrix
    right_transform: IntMatrix

    @property
    def rank(self) -> int:
        return sum(1 for d in self.invariant_factors if d != 0)

    @property
    def nonzero_factors(self) -> Tuple[int, ...]:
        return tuple(d for d in self.invariant_factors if d != 0)

    def diagonal(self) -> IntMatrix:
        rows, cols = self.left_transform.rows, self.right_transform.cols
        diag = _object_zeros(rows, cols)
        for i, d in enumerate(self.invariant_factors):
            diag[i, i] = d
        return IntMatrix.from_numpy(diag)


def _diagonalize(a: np.ndarray, left: Optional[np.ndarray], right: Optional[np.ndarray]) -> List[int]:
    """Reduce ``a`` in place to Smith form, mirroring operations on the transforms."""
    rows, cols = a.shape
    for t in range(min(rows, cols)):
        while True:
            block = a[t:, t:]
            nonzero = np.argwhere(block != 0)
            if len(nonzero) == 0:
                return [int(a[i, i]) for i in range(min(rows, cols))]
            # Smallest absolute value pivot keeps entries small
            i, j = min(((int(x), int(y)) for x, y in nonzero),
                       key=lambda ij: (abs(block[ij[0], ij[1]]), ij))
            i, j = i + t, j + t
            if i != t:
                a[[t, i]] = a[[i, t]]
                if left is not None:
                    left[[t, i]] = left[[i, t]]
            if j != t:
                a[:, [t, j]] = a[:, [j, t]]
                if right is not None:
                    right[:, [t, j]] = right[:, [j, t]]
            pivot = a[t, t]
            clean = True
            for i in range(t + 1, rows):
                if a[i, t] != 0:
                    q = a[i, t] // pivot
                    a[i, t:] = a[i, t:] - q * a[t, t:]
                    if left is not None:
                        left[i, :] = left[i, :] - q * left[t, :]
                    clean = clean and a[i, t] == 0
            for j in range(t + 1, cols):
                if a[t, j] != 0:
                    q = a[t, j] // pivot
                    a[t:, j] = a[t:, j] - q * a[t:, t]
                    if right is not None:
                        right[:, j] = right[:, j] - q * right[:, t]
                    clean = clean and a[t, j] == 0
            if not clean:
                continue
            rest = a[t + 1:, t + 1:]
            offending = np.argwhere(rest % pivot != 0)
            if len(offending):
                i = int(offending[0][0]) + t + 1
                a[t, :] = a[t, :] + a[i, :]
                if left is not None:
                    left[t, :] = left[t, :] + left[i, :]
                continue
            break
        if a[t, t] < 0:
            a[t, :] = -a[t, :]
            if left is not None:
                left[t, :] = -left[t, :]
    return [int(a[i, i]) for i in range(min(rows, cols))]


def smith_normal_form(m: IntMatrix) -> SNFResult:
    """Compute the Smith normal form of an integer matrix with unimodular transforms.

    Args:
        m: Integer matrix of any shape
    Returns:
        SNFResult with invariant factors d_1 | d_2 | ... (zeros last)
    """
    a = m.to_numpy()
    left = _object_identity(m.rows)
    right = _object_identity(m.cols)
    factors = _diagonalize(a, left, right)
    logger.debug("SNF of %dx%d matrix: rank %d", m.rows, m.cols,
                 sum(1 for d in factors if d))
    return SNFResult(tuple(factors), IntMatrix.from_numpy(left), IntMatrix.from_numpy(right))


def invariant_factors(m: IntMatrix) -> Tuple[int, ...]:
    """Invariant factors only, without tracking transforms."""
    return tuple(_diagonalize(m.to_numpy(), None, None))


def hermite_normal_form(vectors: Sequence[Sequence[int]], ambient_rank: int) -> List[Tuple[int, ...]]:
    """Canonical row echelon basis of the lattice spanned by ``vectors``.

    Pivots are positive and entries above each pivot lie in [0, pivot).
    sympy's column Hermite form pivots on the last nonzero coordinate, so it
    runs on the vectors with their coordinates reversed.

    Args:
        vectors: Spanning vectors, each of length ambient_rank
        ambient_rank: Dimension of the ambient lattice
    Returns:
        Basis rows of the spanned lattice
    """
    vectors = [[int(x) for x in v] for v in vectors]
    if any(len(v) != ambient_rank for v in vectors):
        raise ValueError("Vector length does not match ambient rank")
    if not vectors or ambient_rank == 0:
        return []
    columns = [[ZZ(v[ambient_rank - 1 - i]) for v in vectors] for i in range(ambient_rank)]
    hnf = sympy_hnf(DomainMatrix(columns, (ambient_rank, len(vectors)), ZZ)).to_Matrix()
    basis = []
    for j in reversed(range(hnf.cols)):
        basis.append(tuple(int(hnf[ambient_rank - 1 - i, j]) for i in range(ambient_rank)))
    return basis


@dataclass(frozen=True)
class Lattice:
    """Sublattice of Z^n given by a canonical (Hermite) basis."""
    ambient_rank: int
    basis: IntMatrix

    @classmethod
    def span(cls, vectors: Sequence[Sequence[int]], ambient_rank: int) -> 'Lattice':
        """Lattice generated by arbitrary integer vectors."""
        rows = hermite_normal_form(vectors, ambient_rank)
        return cls(ambient_rank, IntMatrix.from_rows(rows, cols=ambient_rank))

    @classmethod
    def ambient(cls, n: int) -> 'Lattice':
        return cls(n, IntMatrix.identity(n))

    @property
    def rank(self) -> int:
        return self.basis.rows

    def vectors(self) -> List[Tuple[int, ...]]:
        return [tuple(row) for row in self.basis.to_rows()]

    def coordinates(self, vector: Sequence[int]) -> Optional[Tuple[int, ...]]:
        """Integer coordinates of ``vector`` in the basis, or None if not in the lattice."""
        residual = [int(x) for x in vector]
        coords = []
        for row in self.basis.to_rows():
            pivot_col = next(c for c, x in enumerate(row) if x != 0)
            q, rem = divmod(residual[pivot_col], row[pivot_col])
            if rem:
                return None
            coords.append(q)
            residual = [a - q * b for a, b in zip(residual, row)]
        if any(residual):
            return None
        return tuple(coords)

    def __contains__(self, vector: Sequence[int]) -> bool:
        return self.coordinates(vector) is not None

    def image(self, m: IntMatrix) -> 'Lattice':
        """Image of the lattice under x ↦ M·x."""
        return Lattice.span([m.apply(v) for v in self.vectors()], m.rows)


def kernel_lattice(m: IntMatrix) -> Lattice:
    """Integer kernel of x ↦ M·x."""
    snf = smith_normal_form(m)
    right = snf.right_transform.to_rows()
    vectors = [[right[i][k] for i in range(m.cols)] for k in range(snf.rank, m.cols)]
    return Lattice.span(vectors, m.cols)


def image_lattice(m: IntMatrix) -> Lattice:
    """Image of x ↦ M·x, spanned by the columns of M."""
    return Lattice.span(m.transpose().to_rows(), m.rows)


def kernel_and_image_saturation(m: IntMatrix) -> Tuple[Lattice, Lattice]:
    """Integer kernel and saturated image of the operator x ↦ M·x.

    The saturated image is the intersection of Z^n with the rational image,
    computed as the integer kernel of the left null space.

    Args:
        m: Integer matrix
    Returns:
        (kernel, saturated_image), both with canonical bases
    """
    kernel = kernel_lattice(m)
    cokernel_dual = kernel_lattice(m.transpose())
    if cokernel_dual.rank == 0:
        return kernel, Lattice.ambient(m.rows)
    return kernel, kernel_lattice(cokernel_dual.basis)


def lattice_index(outer: Lattice, inner: Lattice) -> int:
    """Index [outer : inner] of a full-rank sublattice.

    Raises:
        PreconditionError: On ambient or rank mismatch, or if inner is not contained in outer
    """
    if outer.ambient_rank != inner.ambient_rank:
        raise PreconditionError(
            f"Ambient ranks differ: {outer.ambient_rank} vs {inner.ambient_rank}")
    if outer.rank != inner.rank:
        raise PreconditionError(f"Ranks differ: outer {outer.rank}, inner {inner.rank}")
    change = []
    for position, vector in enumerate(inner.vectors()):
        coords = outer.coordinates(vector)
        if coords is None:
            raise PreconditionError(
                f"Inner basis vector {position} {vector} is not in the outer lattice")
        change.append(coords)
    return abs(IntMatrix.from_rows(change, cols=outer.rank).determinant())

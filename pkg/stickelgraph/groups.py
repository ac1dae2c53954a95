"""Finite abelian groups, subgroups, group rings and characters."""

import logging
from dataclasses import dataclass
from functools import cached_property, reduce
from itertools import product
from math import gcd, lcm
from typing import Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .cyclotomic import CyclotomicNumber
from .errors import PreconditionError
from .linalg import IntMatrix, smith_normal_form

logger = logging.getLogger(__name__)

Element = Tuple[int, ...]


@dataclass(frozen=True)
class FiniteAbelianGroup:
    """Product of cyclic groups Z/n_1 x ... x Z/n_r, written additively.

    Elements are integer vectors reduced componentwise; the canonical element
    order is lexicographic.
    """
    cyclic_orders: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, 'cyclic_orders', tuple(int(n) for n in self.cyclic_orders))
        if any(n < 1 for n in self.cyclic_orders):
            raise ValueError("Cyclic orders must be positive")

    @classmethod
    def cyclic(cls, n: int) -> 'FiniteAbelianGroup':
        return cls((n,))

    @cached_property
    def elements(self) -> Tuple[Element, ...]:
        return tuple(product(*(range(n) for n in self.cyclic_orders)))

    @cached_property
    def _index(self) -> Dict[Element, int]:
        return {g: i for i, g in enumerate(self.elements)}

    @property
    def order(self) -> int:
        return reduce(lambda a, b: a * b, self.cyclic_orders, 1)

    @property
    def exponent(self) -> int:
        return lcm(*self.cyclic_orders) if self.cyclic_orders else 1

    @property
    def identity(self) -> Element:
        return (0,) * len(self.cyclic_orders)

    def reduce(self, vector: Sequence[int]) -> Element:
        if len(vector) != len(self.cyclic_orders):
            raise PreconditionError(
                f"Element {tuple(vector)} does not match cyclic orders {self.cyclic_orders}")
        return tuple(int(x) % n for x, n in zip(vector, self.cyclic_orders))

    def element_index(self, g: Element) -> int:
        return self._index[g]

    def add(self, g: Element, h: Element) -> Element:
        return tuple((a + b) % n for a, b, n in zip(g, h, self.cyclic_orders))

    def neg(self, g: Element) -> Element:
        return tuple((-a) % n for a, n in zip(g, self.cyclic_orders))

    def scale(self, k: int, g: Element) -> Element:
        return tuple((k * a) % n for a, n in zip(g, self.cyclic_orders))

    def element_order(self, g: Element) -> int:
        return lcm(*(n // gcd(a, n) for a, n in zip(g, self.cyclic_orders))) if g else 1

    def involutions(self) -> List[Element]:
        return [g for g in self.elements if self.element_order(g) == 2]

    def subgroup(self, generators: Iterable[Element]) -> 'Subgroup':
        """Subgroup generated by the given elements."""
        gens = tuple(self.reduce(g) for g in generators)
        members = {self.identity}
        frontier = [self.identity]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = self.add(x, g)
                    if y not in members:
                        members.add(y)
                        nxt.append(y)
            frontier = nxt
        return Subgroup(self, frozenset(members), gens)

    def subgroups(self) -> List['Subgroup']:
        """All subgroups, by order then by sorted members."""
        found: Dict[frozenset, Subgroup] = {}
        for g in self.elements:
            h = self.subgroup([g])
            found.setdefault(h.elements, h)
        changed = True
        while changed:
            changed = False
            current = list(found.values())
            for a, b in product(current, repeat=2):
                joined = self.subgroup(a.generators + b.generators)
                if joined.elements not in found:
                    found[joined.elements] = joined
                    changed = True
        return sorted(found.values(), key=lambda h: (h.order, sorted(h.elements)))

    def characters(self) -> List['Character']:
        """All characters, indexed by exponent vectors in lexicographic order."""
        return [Character(self, exps) for exps in self.elements]

    def trivial_character(self) -> 'Character':
        return Character(self, self.identity)


@dataclass(frozen=True)
class Subgroup:
    """Subgroup of a FiniteAbelianGroup given by its members."""
    group: FiniteAbelianGroup
    elements: frozenset
    generators: Tuple[Element, ...] = ()

    def __post_init__(self):
        members = self.elements
        if self.group.identity not in members:
            raise PreconditionError("Subgroup must contain the identity")
        for g in members:
            if g not in self.group._index:
                raise PreconditionError(f"{g} is not an element of the group")
            if self.group.neg(g) not in members:
                raise PreconditionError("Subset is not closed under inverses")
            for h in members:
                if self.group.add(g, h) not in members:
                    raise PreconditionError("Subset is not closed under the group law")
        if not self.generators:
            object.__setattr__(self, 'generators', tuple(sorted(members)))

    @classmethod
    def from_elements(cls, group: FiniteAbelianGroup, elements: Iterable[Sequence[int]]) -> 'Subgroup':
        """Validate a subset as a subgroup.

        Raises:
            PreconditionError: If the subset is not a subgroup
        """
        return cls(group, frozenset(group.reduce(g) for g in elements))

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def index(self) -> int:
        return self.group.order // self.order

    def __contains__(self, g: Element) -> bool:
        return g in self.elements

    def coset_representative(self, g: Element) -> Element:
        """Lexicographically minimal element of g + H."""
        return min(self.group.add(g, h) for h in self.elements)

    @cached_property
    def coset_representatives(self) -> Tuple[Element, ...]:
        return tuple(sorted({self.coset_representative(g) for g in self.group.elements}))

    @cached_property
    def coset_index(self) -> Dict[Element, int]:
        """Position of the coset of every group element among the sorted representatives."""
        position = {c: i for i, c in enumerate(self.coset_representatives)}
        return {g: position[self.coset_representative(g)] for g in self.group.elements}


def quotient_group(group: FiniteAbelianGroup,
                   subgroup: Subgroup) -> Tuple[FiniteAbelianGroup, Callable[[Element], Element]]:
    """Realise G/H as a product of cyclic groups.

    The relation lattice of G/H is diagonalised by a Smith normal form; the
    image of x has coordinates (x·V)_i mod d_i, dropping trivial factors.

    Args:
        group: The group G
        subgroup: The subgroup H
    Returns:
        (quotient group, projection map)
    """
    r = len(group.cyclic_orders)
    relations = [[n if i == k else 0 for i in range(r)] for k, n in enumerate(group.cyclic_orders)]
    relations += [list(h) for h in subgroup.generators]
    snf = smith_normal_form(IntMatrix.from_rows(relations, cols=r))
    right = snf.right_transform.to_rows()
    kept = [i for i, d in enumerate(snf.invariant_factors) if d != 1]
    quotient = FiniteAbelianGroup(tuple(snf.invariant_factors[i] for i in kept))

    def project(g: Element) -> Element:
        coords = [sum(g[k] * right[k][i] for k in range(r)) for i in kept]
        return quotient.reduce(coords)

    return quotient, project


@dataclass(frozen=True)
class GroupRingElement:
    """Element of the integral group ring Z[G]; absent terms are zero."""
    group: FiniteAbelianGroup
    terms: Tuple[Tuple[Element, int], ...]

    def __post_init__(self):
        merged: Dict[Element, int] = {}
        for g, c in self.terms:
            g = self.group.reduce(g)
            merged[g] = merged.get(g, 0) + int(c)
        object.__setattr__(self, 'terms', tuple(sorted((g, c) for g, c in merged.items() if c)))

    @classmethod
    def from_dict(cls, group: FiniteAbelianGroup, coefficients: Mapping[Element, int]) -> 'GroupRingElement':
        return cls(group, tuple(coefficients.items()))

    @classmethod
    def zero(cls, group: FiniteAbelianGroup) -> 'GroupRingElement':
        return cls(group, ())

    @classmethod
    def scalar(cls, group: FiniteAbelianGroup, value: int) -> 'GroupRingElement':
        return cls(group, ((group.identity, value),))

    @classmethod
    def basis(cls, group: FiniteAbelianGroup, g: Element, coefficient: int = 1) -> 'GroupRingElement':
        return cls(group, ((g, coefficient),))

    @classmethod
    def norm_element(cls, group: FiniteAbelianGroup) -> 'GroupRingElement':
        """Sum of all group elements."""
        return cls(group, tuple((g, 1) for g in group.elements))

    def as_dict(self) -> Dict[Element, int]:
        return dict(self.terms)

    def coefficient(self, g: Element) -> int:
        return self.as_dict().get(self.group.reduce(g), 0)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def augmentation(self) -> int:
        return sum(c for _, c in self.terms)

    def _check(self, other: 'GroupRingElement'):
        if other.group != self.group:
            raise ValueError("Group ring elements over different groups")

    def __add__(self, other: 'GroupRingElement') -> 'GroupRingElement':
        self._check(other)
        return GroupRingElement(self.group, self.terms + other.terms)

    def __neg__(self) -> 'GroupRingElement':
        return GroupRingElement(self.group, tuple((g, -c) for g, c in self.terms))

    def __sub__(self, other: 'GroupRingElement') -> 'GroupRingElement':
        return self + (-other)

    def __mul__(self, other) -> 'GroupRingElement':
        if isinstance(other, int):
            return GroupRingElement(self.group, tuple((g, c * other) for g, c in self.terms))
        self._check(other)
        out: Dict[Element, int] = {}
        for g, a in self.terms:
            for h, b in other.terms:
                gh = self.group.add(g, h)
                out[gh] = out.get(gh, 0) + a * b
        return GroupRingElement.from_dict(self.group, out)

    __rmul__ = __mul__

    def translate(self, g: Element) -> 'GroupRingElement':
        """Multiply by the group element g."""
        return GroupRingElement(self.group, tuple((self.group.add(h, g), c) for h, c in self.terms))

    def map_group(self, target: FiniteAbelianGroup,
                  projection: Callable[[Element], Element]) -> 'GroupRingElement':
        """Push coefficients forward along a group homomorphism."""
        return GroupRingElement(target, tuple((projection(g), c) for g, c in self.terms))

    def to_json(self) -> Dict[str, int]:
        return {','.join(str(x) for x in g): c for g, c in self.terms}


@dataclass(frozen=True)
class GroupRingPolynomial:
    """Polynomial in u over Z[G], ascending degree."""
    group: FiniteAbelianGroup
    coefficients: Tuple[GroupRingElement, ...]

    def __post_init__(self):
        coeffs = list(self.coefficients)
        while coeffs and coeffs[-1].is_zero:
            coeffs.pop()
        if any(c.group != self.group for c in coeffs):
            raise ValueError("Coefficient group mismatch")
        object.__setattr__(self, 'coefficients', tuple(coeffs))

    @classmethod
    def constant(cls, element: GroupRingElement) -> 'GroupRingPolynomial':
        return cls(element.group, (element,))

    @classmethod
    def one(cls, group: FiniteAbelianGroup) -> 'GroupRingPolynomial':
        return cls(group, (GroupRingElement.scalar(group, 1),))

    @classmethod
    def zero(cls, group: FiniteAbelianGroup) -> 'GroupRingPolynomial':
        return cls(group, ())

    @property
    def is_zero(self) -> bool:
        return not self.coefficients

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def coefficient(self, k: int) -> GroupRingElement:
        if 0 <= k < len(self.coefficients):
            return self.coefficients[k]
        return GroupRingElement.zero(self.group)

    def __add__(self, other: 'GroupRingPolynomial') -> 'GroupRingPolynomial':
        n = max(len(self.coefficients), len(other.coefficients))
        return GroupRingPolynomial(self.group, tuple(self.coefficient(k) + other.coefficient(k) for k in range(n)))

    def __neg__(self) -> 'GroupRingPolynomial':
        return GroupRingPolynomial(self.group, tuple(-c for c in self.coefficients))

    def __sub__(self, other: 'GroupRingPolynomial') -> 'GroupRingPolynomial':
        return self + (-other)

    def __mul__(self, other: 'GroupRingPolynomial') -> 'GroupRingPolynomial':
        if self.is_zero or other.is_zero:
            return GroupRingPolynomial.zero(self.group)
        out = [GroupRingElement.zero(self.group)] * (len(self.coefficients) + len(other.coefficients) - 1)
        for i, a in enumerate(self.coefficients):
            for j, b in enumerate(other.coefficients):
                out[i + j] = out[i + j] + a * b
        return GroupRingPolynomial(self.group, tuple(out))

    def evaluate(self, u: int) -> GroupRingElement:
        total = GroupRingElement.zero(self.group)
        for k, c in enumerate(self.coefficients):
            total = total + c * (u ** k)
        return total

    def map_coefficients(self, fn: Callable[[GroupRingElement], GroupRingElement],
                         target: Optional[FiniteAbelianGroup] = None) -> 'GroupRingPolynomial':
        target = target or self.group
        return GroupRingPolynomial(target, tuple(fn(c) for c in self.coefficients))

    def to_json(self) -> List[Dict[str, int]]:
        return [c.to_json() for c in self.coefficients]


def group_ring_determinant(matrix: Sequence[Sequence[GroupRingPolynomial]],
                           group: FiniteAbelianGroup,
                           warn_size: int = 8) -> GroupRingPolynomial:
    """Determinant over the commutative ring Z[G][u].

    Memoised cofactor expansion along rows; exponential in the matrix size.
    """
    n = len(matrix)
    if n > warn_size:
        logger.warning("Group-ring determinant of size %d uses exponential cofactor expansion", n)
    memo: Dict[Tuple[int, frozenset], GroupRingPolynomial] = {}

    def minor(row: int, columns: frozenset) -> GroupRingPolynomial:
        if row == n:
            return GroupRingPolynomial.one(group)
        key = (row, columns)
        if key not in memo:
            total = GroupRingPolynomial.zero(group)
            for position, c in enumerate(sorted(columns)):
                entry = matrix[row][c]
                if entry.is_zero:
                    continue
                term = entry * minor(row + 1, columns - {c})
                total = total + term if position % 2 == 0 else total - term
            memo[key] = total
        return memo[key]

    return minor(0, frozenset(range(n)))


@dataclass(frozen=True)
class Character:
    """Character ψ of a finite abelian group with values in Q(ζ_e), e the exponent.

    ψ sends the k-th cyclic generator to ζ_e^(exponents[k] · e / n_k).
    """
    group: FiniteAbelianGroup
    exponents: Element

    def __post_init__(self):
        object.__setattr__(self, 'exponents', self.group.reduce(self.exponents))

    @property
    def field_order(self) -> int:
        return self.group.exponent

    @property
    def is_trivial(self) -> bool:
        return self.exponents == self.group.identity

    def power_at(self, g: Element) -> int:
        """k with ψ(g) = ζ_e^k."""
        e = self.field_order
        return sum(a * x * (e // n) for a, x, n in zip(self.exponents, g, self.group.cyclic_orders)) % e

    def value(self, g: Element) -> CyclotomicNumber:
        return CyclotomicNumber.root_of_unity(self.field_order, self.power_at(g))

    def inverse(self) -> 'Character':
        return Character(self.group, self.group.neg(self.exponents))

    def apply(self, element: GroupRingElement) -> CyclotomicNumber:
        """Extend ψ linearly to Z[G]."""
        if element.group != self.group:
            raise PreconditionError("Character and group ring element live on different groups")
        e = self.field_order
        coeffs = [0] * e
        for g, c in element.terms:
            coeffs[self.power_at(g)] += c
        return CyclotomicNumber(e, tuple(coeffs))

    @property
    def parity(self) -> str:
        """'odd' when ψ(j) = -1 for the unique element j of order 2, else 'even'.

        Raises:
            PreconditionError: If the group has no unique element of order 2
        """
        involutions = self.group.involutions()
        if len(involutions) != 1:
            raise PreconditionError("Parity needs a unique element of order 2")
        return 'odd' if self.value(involutions[0]) == CyclotomicNumber.from_int(self.field_order, -1) else 'even'

    @property
    def is_odd(self) -> bool:
        return self.parity == 'odd'

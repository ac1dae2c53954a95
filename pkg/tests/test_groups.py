"""Unit tests for finite abelian groups, group rings and characters."""

import pytest

from stickelgraph.cyclotomic import CyclotomicNumber
from stickelgraph.errors import PreconditionError
from stickelgraph.groups import (Character, FiniteAbelianGroup, GroupRingElement, GroupRingPolynomial,
                                 Subgroup, group_ring_determinant, quotient_group)


@pytest.fixture
def klein():
    return FiniteAbelianGroup((2, 2))


@pytest.fixture
def z6():
    return FiniteAbelianGroup.cyclic(6)


def test_elements_and_order(klein, z6):
    """Test canonical element order, order and exponent."""
    assert klein.elements == ((0, 0), (0, 1), (1, 0), (1, 1))
    assert klein.order == 4
    assert klein.exponent == 2
    assert z6.exponent == 6
    assert z6.element_order((4,)) == 3
    assert z6.involutions() == [(3,)]
    assert len(klein.involutions()) == 3

    with pytest.raises(ValueError):
        FiniteAbelianGroup((0,))
    with pytest.raises(PreconditionError):
        z6.reduce((1, 2))


def test_subgroups(z6, klein):
    """Test generated subgroups and the subgroup lattice."""
    h = z6.subgroup([(2,)])
    assert h.elements == frozenset({(0,), (2,), (4,)})
    assert h.index == 2
    assert (4,) in h
    assert [s.order for s in z6.subgroups()] == [1, 2, 3, 6]
    assert len(klein.subgroups()) == 5


def test_subgroup_validation(z6):
    """Test that subsets which are not subgroups are rejected."""
    assert Subgroup.from_elements(z6, [(0,), (3,)]).order == 2
    with pytest.raises(PreconditionError):
        Subgroup.from_elements(z6, [(0,), (1,)])
    with pytest.raises(PreconditionError):
        Subgroup.from_elements(z6, [(1,), (5,)])


def test_cosets(z6):
    """Test minimal coset representatives and coset positions."""
    h = z6.subgroup([(3,)])
    assert h.coset_representatives == ((0,), (1,), (2,))
    assert h.coset_representative((5,)) == (2,)
    assert h.coset_index[(4,)] == 1


def test_quotient_group(z6, klein):
    """Test realisations of quotients as products of cyclic groups."""
    quotient, project = quotient_group(z6, z6.subgroup([(2,)]))
    assert quotient.order == 2
    assert project((1,)) != project((0,))
    assert project((2,)) == quotient.identity

    quotient, project = quotient_group(klein, klein.subgroup([(1, 1)]))
    assert quotient.order == 2
    assert project((1, 1)) == quotient.identity
    assert project((1, 0)) == project((0, 1))

    quotient, _ = quotient_group(z6, z6.subgroup([(1,)]))
    assert quotient.order == 1


def test_group_ring_arithmetic(z6):
    """Test sums, products, augmentation and the norm element."""
    a = GroupRingElement.basis(z6, (1,), 2)
    b = GroupRingElement.from_dict(z6, {(5,): 1, (0,): -1})
    assert (a * b).as_dict() == {(0,): 2, (1,): -2}
    assert (a + b).augmentation() == 2
    assert (a - a).is_zero
    assert (a * 3).coefficient((1,)) == 6
    assert a.translate((5,)) == GroupRingElement.basis(z6, (0,), 2)

    norm = GroupRingElement.norm_element(z6)
    assert norm * GroupRingElement.basis(z6, (2,)) == norm
    assert norm.augmentation() == 6


def test_group_ring_map_and_json(z6):
    """Test pushing forward along a projection and the JSON form."""
    quotient, project = quotient_group(z6, z6.subgroup([(2,)]))
    image = GroupRingElement.norm_element(z6).map_group(quotient, project)
    assert image == GroupRingElement.norm_element(quotient) * 3
    assert GroupRingElement.basis(z6, (4,), -3).to_json() == {'4': -3}


def test_group_ring_polynomial(z6):
    """Test polynomial arithmetic and evaluation over Z[G]."""
    one = GroupRingPolynomial.one(z6)
    t = GroupRingPolynomial(z6, (GroupRingElement.zero(z6), GroupRingElement.basis(z6, (1,))))
    p = (one - t) * (one + t)
    assert p.degree == 2
    assert p.coefficient(2) == -GroupRingElement.basis(z6, (2,))
    assert p.evaluate(1) == GroupRingElement.scalar(z6, 1) - GroupRingElement.basis(z6, (2,))
    assert GroupRingPolynomial.zero(z6).is_zero


def test_group_ring_determinant(z6):
    """Test a 2x2 determinant over Z[G][u] against the expanded product."""
    one = GroupRingPolynomial.one(z6)
    g = GroupRingPolynomial.constant(GroupRingElement.basis(z6, (1,)))
    matrix = [[one, g], [g, one]]
    expected = one - g * g
    assert group_ring_determinant(matrix, z6) == expected
    assert group_ring_determinant([], z6) == one


def test_characters(z6):
    """Test values, inverses and linear extension of characters."""
    psi = z6.characters()[1]
    assert psi.exponents == (1,)
    assert psi.value((1,)) == CyclotomicNumber.root_of_unity(6, 1)
    assert psi.inverse().exponents == (5,)
    assert psi.value((3,)) == CyclotomicNumber.from_int(6, -1)
    assert psi.apply(GroupRingElement.norm_element(z6)).is_zero
    assert z6.trivial_character().apply(GroupRingElement.norm_element(z6)) == CyclotomicNumber.from_int(6, 6)


def test_character_parity(z6, klein):
    """Test odd and even characters and the unique-involution requirement."""
    assert Character(z6, (1,)).is_odd
    assert Character(z6, (2,)).parity == 'even'
    with pytest.raises(PreconditionError):
        Character(klein, (1, 0)).parity


def test_character_on_product_group(klein):
    """Test that characters of non-cyclic groups take values in the exponent field."""
    psi = Character(klein, (1, 1))
    assert psi.field_order == 2
    assert psi.value((1, 0)) == CyclotomicNumber.from_int(2, -1)
    assert psi.value((1, 1)) == CyclotomicNumber.from_int(2, 1)

"""Unit tests for voltage assignments, derived digraphs and equivariant zeta functions."""

import random

import pytest

from stickelgraph.bowen_franks import zeta_report_from_adjacency
from stickelgraph.cyclotomic import CyclotomicPolynomial
from stickelgraph.digraph import (Digraph, adjacency_matrix, bouquet, check_cover,
                                  is_strongly_connected)
from stickelgraph.errors import PreconditionError
from stickelgraph.groups import FiniteAbelianGroup, GroupRingElement, GroupRingPolynomial
from stickelgraph.polynomials import IntPolynomial, reversed_char_poly
from stickelgraph.voltage import (VoltageAssignment, character_L, closed_path_subgroup,
                                  derived_adjacency, derived_digraph, derived_is_connected,
                                  equivariant_zeta, equivariant_zeta_of_action, induction_check,
                                  induction_norm, inflate, inflation_check, intermediate_action,
                                  intermediate_adjacency, intermediate_quotient,
                                  product_decomposition_check, voltage_adjacency)


@pytest.fixture
def klein_voltage():
    """Two loops over Z/2 x Z/2 with voltages (1, 0) and (0, 1), plus a trivial loop."""
    return VoltageAssignment(bouquet(3), FiniteAbelianGroup((2, 2)), ((1, 0), (0, 1), (0, 0)))


@pytest.fixture
def cycle_voltage():
    """Directed 2-cycle with one loop, voltages over Z/3."""
    base = Digraph.from_labels(['a', 'b'], [('x', 'a', 'b'), ('y', 'b', 'a'), ('z', 'a', 'a')])
    return VoltageAssignment.from_mapping(base, FiniteAbelianGroup.cyclic(3),
                                          {'x': (1,), 'y': (0,), 'z': (2,)})


def test_voltage_assignment_validation(three_loops):
    """Test label count and mapping completeness checks."""
    group = FiniteAbelianGroup.cyclic(2)
    with pytest.raises(PreconditionError):
        VoltageAssignment(three_loops, group, ((0,),))
    with pytest.raises(PreconditionError):
        VoltageAssignment.from_mapping(three_loops, group, {'e1': (0,)})
    # voltages are reduced into the group
    assert VoltageAssignment(three_loops, group, ((3,), (2,), (1,))).labels == ((1,), (0,), (1,))


def test_derived_digraph(example_voltage):
    """Test vertex indexing, projection and translation action of X(G, α)."""
    derived, projection, action = derived_digraph(example_voltage)
    assert derived.num_vertices == 2
    assert derived.num_edges == 6
    assert derived.vertex_labels == ('v@0', 'v@1')
    assert adjacency_matrix(derived).to_rows() == [[2, 1], [1, 2]]
    assert check_cover(projection)
    assert action.is_vertex_free
    assert derived_adjacency(example_voltage) == adjacency_matrix(derived)


def test_derived_adjacency_matches_edges(cycle_voltage, klein_voltage):
    """Test the direct adjacency formula against the built digraph."""
    for voltage in (cycle_voltage, klein_voltage):
        derived, _, _ = derived_digraph(voltage)
        assert derived_adjacency(voltage) == adjacency_matrix(derived)


def test_connectivity(example_voltage, three_loops):
    """Test the closed-path voltage subgroup against direct connectivity."""
    assert derived_is_connected(example_voltage)
    assert closed_path_subgroup(example_voltage).order == 2
    trivial = VoltageAssignment(three_loops, FiniteAbelianGroup.cyclic(2), ((0,), (0,), (0,)))
    assert not derived_is_connected(trivial)
    assert closed_path_subgroup(trivial).order == 1

    with pytest.raises(PreconditionError):
        equivariant_zeta(trivial)


def test_connectivity_through_cycle(cycle_voltage):
    """Test a base with two vertices where the cycle itself carries voltage."""
    assert closed_path_subgroup(cycle_voltage).order == 3
    derived, _, _ = derived_digraph(cycle_voltage)
    assert is_strongly_connected(derived)


def test_intermediate_quotient(klein_voltage):
    """Test X(G, H, α) for H of order 2."""
    group = klein_voltage.group
    h = group.subgroup([(1, 0)])
    z = intermediate_quotient(klein_voltage, h)
    assert z.num_vertices == 2
    assert adjacency_matrix(z) == intermediate_adjacency(klein_voltage, h)
    # loops (1,0) and (0,0) stay, (0,1) swaps the cosets
    assert adjacency_matrix(z).to_rows() == [[2, 1], [1, 2]]

    whole = intermediate_adjacency(klein_voltage, group.subgroup([(1, 0), (0, 1)]))
    assert whole.to_rows() == [[3]]
    trivial = intermediate_adjacency(klein_voltage, group.subgroup([]))
    assert trivial == derived_adjacency(klein_voltage)


def test_voltage_adjacency(example_voltage):
    """Test the group-ring adjacency of the example cover."""
    group = example_voltage.group
    assert voltage_adjacency(example_voltage) == [[GroupRingElement.from_dict(group, {(0,): 2, (1,): 1})]]


def test_equivariant_zeta(example_voltage):
    """Test γ(u) = 1 - (2 + τ)u for the example cover."""
    group = example_voltage.group
    gamma = equivariant_zeta(example_voltage)
    assert gamma.coefficients == (
        GroupRingElement.scalar(group, 1),
        GroupRingElement.from_dict(group, {(0,): -2, (1,): -1}),
    )
    trivial = character_L(gamma, group.trivial_character())
    assert trivial == CyclotomicPolynomial.from_int_poly(2, IntPolynomial.of(1, -3))
    sign = character_L(gamma, group.characters()[1])
    assert sign == CyclotomicPolynomial.from_int_poly(2, IntPolynomial.of(1, -1))


def test_equivariant_zeta_of_action(example_voltage, klein_voltage):
    """Test that reading γ off the translation action reproduces the voltage formula."""
    for voltage in (example_voltage, klein_voltage):
        derived, _, action = derived_digraph(voltage)
        assert equivariant_zeta_of_action(derived, action) == equivariant_zeta(voltage)


def test_product_decomposition(example_voltage, klein_voltage, cycle_voltage):
    """Test g_Y = g_X · Π ψ(γ) and additivity of vanishing orders."""
    report = product_decomposition_check(example_voltage)
    assert report
    assert report.r_derived == 1
    assert report.r_base == 0
    assert report.r_by_character == {'1': 1}
    assert report.trivial_matches_base
    assert report.to_dict()['holds']

    assert product_decomposition_check(klein_voltage)
    assert product_decomposition_check(cycle_voltage)


def test_inflation(klein_voltage, cycle_voltage):
    """Test that γ inflates to the equivariant zeta of every intermediate quotient."""
    for voltage in (klein_voltage, cycle_voltage):
        for h in voltage.group.subgroups():
            assert inflation_check(voltage, h)


def test_inflate_to_trivial_quotient(example_voltage):
    """Test that inflating to G/G recovers the base zeta polynomial."""
    gamma = equivariant_zeta(example_voltage)
    inflated, quotient = inflate(gamma, example_voltage.group.subgroup([(1,)]))
    assert quotient.order == 1
    assert [c.augmentation() for c in inflated.coefficients] == [1, -3]


def test_intermediate_action(klein_voltage):
    """Test the action of G/H on the intermediate quotient."""
    h = klein_voltage.group.subgroup([(0, 1)])
    z, action = intermediate_action(klein_voltage, h)
    assert action.group.order == 2
    assert action.is_vertex_free
    assert z.num_vertices == 2


def test_induction(klein_voltage, example_voltage):
    """Test that the norm of γ down to Z[H] is the zeta of Y over Y_H."""
    for voltage in (klein_voltage, example_voltage):
        for h in voltage.group.subgroups():
            assert induction_check(voltage, h)


def test_induction_norm_to_trivial_subgroup(example_voltage):
    """Test that the norm to Z[1] is det(I - A_Y u)."""
    gamma = equivariant_zeta(example_voltage)
    group = example_voltage.group
    norm = induction_norm(gamma, group.subgroup([]))
    g_y = reversed_char_poly(derived_adjacency(example_voltage))
    expected = GroupRingPolynomial(group, tuple(GroupRingElement.scalar(group, c) for c in g_y.coefficients))
    assert norm == expected


def test_bouquet_covers_are_never_defective():
    """Test δ = 0 for connected derived digraphs of random bouquet voltages."""
    rng = random.Random(23)
    connected = 0
    for _ in range(80):
        group = FiniteAbelianGroup(tuple(rng.choice([2, 3, 4, 5, 6]) for _ in range(rng.randint(1, 2))))
        if group.order > 12:
            continue
        k = rng.randint(1, 5)
        voltage = VoltageAssignment(bouquet(k), group, tuple(rng.choice(group.elements) for _ in range(k)))
        if not derived_is_connected(voltage):
            continue
        report = zeta_report_from_adjacency(derived_adjacency(voltage))
        assert report.delta == 0
        assert report.m is not None
        connected += 1
    assert connected >= 10

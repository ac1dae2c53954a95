"""Unit tests for Stickelberger covers, Bernoulli numbers and minus class numbers."""

import time
from fractions import Fraction

import pytest
from sympy import primerange

from stickelgraph.bowen_franks import BFGroupStructure, bf_operator_from_adjacency, zeta_report_from_adjacency
from stickelgraph.config import Settings
from stickelgraph.cyclotomic import CyclotomicNumber
from stickelgraph.errors import PreconditionError, PrimeCapError
from stickelgraph.groups import GroupRingElement
from stickelgraph.polynomials import IntPolynomial
from stickelgraph.stickelberger import (bernoulli_b1, circulant_matrix, circulant_poly, closed_form_m,
                                        closed_form_m_plus, eigenvalue_check, m_via_resultant,
                                        minus_class_number, minus_cokernel_order, plus_kernel_index,
                                        plus_quotient_analysis, primitive_roots, stickelberger_cover,
                                        stickelberger_element, unit_group, verify_theorem_a)

# h^-(Q(ζ_p)) for small p
KNOWN_H_MINUS = {3: 1, 5: 1, 7: 1, 11: 1, 13: 1, 17: 1, 19: 1, 23: 3, 29: 8, 31: 9, 37: 37, 41: 121,
                 43: 211, 47: 695, 53: 4889, 59: 41241, 61: 76301}


def test_unit_group():
    """Test discrete logs, complex conjugation and odd characters."""
    units = unit_group(5)
    assert units.generator == 2
    assert units.sigma(1) == (0,)
    assert units.sigma(3) == (3,)
    assert units.residue((2,)) == 4
    assert units.complex_conjugation == (2,)
    assert units.plus_subgroup().order == 2
    assert [psi.exponents for psi in units.odd_characters()] == [(1,), (3,)]
    assert unit_group(5, 3).generator == 3
    assert primitive_roots(7) == [3, 5]

    with pytest.raises(PreconditionError):
        unit_group(5, 4)
    with pytest.raises(PreconditionError):
        unit_group(9)


def test_stickelberger_element():
    """Test pθ for p = 3 and p = 5."""
    units = unit_group(3)
    expected = GroupRingElement.from_dict(units.group, {units.sigma(1): -1, units.sigma(2): -2})
    assert stickelberger_element(3) == expected

    units = unit_group(5)
    expected = GroupRingElement.from_dict(
        units.group, {units.sigma(1): -1, units.sigma(3): -2, units.sigma(2): -3, units.sigma(4): -4})
    assert stickelberger_element(5) == expected
    assert stickelberger_element(5).augmentation() == -10


def test_cover_p3(cover3):
    """Test Y for p = 3: adjacency, Bowen-Franks group and zeta data."""
    assert cover3.base.num_edges == 4
    assert cover3.adjacency().to_rows() == [[2, 2], [2, 2]]
    assert bf_operator_from_adjacency(cover3.adjacency()).to_rows() == [[-1, -2], [-2, -1]]
    report = zeta_report_from_adjacency(cover3.adjacency())
    assert report.g == IntPolynomial.of(1, -4)
    assert report.bf == BFGroupStructure(0, (3,))
    assert report.special_value == -3
    assert report.m == -1


def test_cover_base_size(cover5, cover7):
    """Test that the bouquet has p(p-1)/2 + 1 loops."""
    assert cover5.base.num_edges == 11
    assert cover7.base.num_edges == 22
    assert cover5.derived.num_vertices == 4


def test_cover_preconditions():
    """Test rejection of non-primes and of primes above the cap."""
    with pytest.raises(PreconditionError):
        stickelberger_cover(9)
    with pytest.raises(PreconditionError):
        stickelberger_cover(2)
    with pytest.raises(PrimeCapError):
        stickelberger_cover(11, settings=Settings(prime_cap=7))


def test_cover_with_other_generator():
    """Test that a non-default primitive root gives the same Bowen-Franks group."""
    default = stickelberger_cover(7)
    other = stickelberger_cover(7, generator=5)
    assert other.generator == 5
    assert (zeta_report_from_adjacency(other.adjacency()).bf
            == zeta_report_from_adjacency(default.adjacency()).bf)


def test_bernoulli_p3():
    """Test B_{1,ψ} = -1/3 for the odd character mod 3."""
    units = unit_group(3)
    value = bernoulli_b1(3, units.character(1), units)
    assert value == CyclotomicNumber.from_fraction(2, Fraction(-1, 3))

    with pytest.raises(PreconditionError):
        bernoulli_b1(3, units.character(0), units)


def test_bernoulli_even_characters_vanish():
    """Test B_{1,ψ} = 0 for even nontrivial ψ."""
    units = unit_group(7)
    for j in (2, 4):
        assert bernoulli_b1(7, units.character(j), units).is_zero


@pytest.mark.parametrize('p', [3, 5, 7, 11, 13, 23, 29, 31, 37])
def test_minus_class_number_product(p):
    """Test the exact cyclotomic product against known values."""
    assert minus_class_number(p, 'product') == KNOWN_H_MINUS[p]


@pytest.mark.parametrize('p', [3, 7, 23, 31, 41])
def test_minus_class_number_paths_agree(p):
    """Test that the resultant path reproduces the product path."""
    assert minus_class_number(p, 'resultant') == KNOWN_H_MINUS[p]
    assert minus_class_number(p, 'resultant', generator=primitive_roots(p)[-1]) == KNOWN_H_MINUS[p]


def test_minus_class_number_large_prime():
    """Test h^- for p = 67 through the automatic method choice."""
    assert minus_class_number(67) == 12739


def test_minus_class_number_unknown_method():
    with pytest.raises(ValueError):
        minus_class_number(5, 'guess')


def test_circulant_data_p5():
    """Test f(x) and the circulant operator for p = 5."""
    assert circulant_poly(5) == IntPolynomial.of(1, 3, 4, 2)
    assert circulant_matrix(5).to_rows() == [
        [-1, -2, -4, -3],
        [-3, -1, -2, -4],
        [-4, -3, -1, -2],
        [-2, -4, -3, -1],
    ]


@pytest.mark.parametrize('p', [3, 5, 7, 11])
def test_circulant_matches_bf_operator(p):
    """Test that the BF operator of Y is the circulant in the τ-basis."""
    cover = stickelberger_cover(p)
    assert circulant_matrix(p) == bf_operator_from_adjacency(cover.adjacency())


@pytest.mark.parametrize('p', list(primerange(3, 24)))
def test_eigenvalues(p):
    """Test -f(ζ^j) against the Bernoulli numbers, and the rank of the circulant."""
    assert eigenvalue_check(p) == []
    assert circulant_matrix(p).rank() == (p + 1) // 2


@pytest.mark.parametrize('p,expected', [(3, -1), (5, 4), (7, -12), (11, -80), (13, 192)])
def test_m_closed_form(p, expected):
    """Test m(Y) in closed form and through the resultant."""
    assert closed_form_m(p) == expected
    assert m_via_resultant(p) == abs(expected)


def test_m_plus_closed_form():
    assert closed_form_m_plus(5) == 2
    assert closed_form_m_plus(7) == -3


def test_plus_part_p5(cover5):
    """Test BF(Y+) = Z + Z/5 with g*(1) = 10 and m = 2."""
    report = plus_quotient_analysis(5, cover=cover5)
    assert report.holds
    assert report.bf == BFGroupStructure(1, (5,))
    assert report.zeta.special_value == 10
    assert report.m == 2
    assert report.to_dict()['gamma_at_one'] == {'0': -5, '1': -5}


@pytest.mark.parametrize('p', [3, 7, 11, 13])
def test_plus_part_sweep(p):
    assert plus_quotient_analysis(p).holds


@pytest.mark.slow
@pytest.mark.parametrize('p', list(primerange(17, 42)))
def test_plus_part_sweep_to_41(p):
    """Test BF(Y+) = Z^((p-3)/2) + Z/p and the closed forms of g* and m for Y+."""
    report = plus_quotient_analysis(p)
    assert report.mismatches == []
    assert report.bf == BFGroupStructure((p - 3) // 2, (p,))
    assert report.m == closed_form_m_plus(p)


def test_kernel_index_and_minus_cokernel(cover5):
    """Test [ker BF(Y+) : f(ker BF(Y))] = 2 and the minus cokernel for p = 5."""
    assert plus_kernel_index(5, cover5) == 2
    # Π_{j odd} f(ζ^j) = (-3 + i)(-3 - i) = 10
    assert minus_cokernel_order(5) == 10


def test_theorem_a_p5():
    """Test the full record for p = 5."""
    record = verify_theorem_a(5)
    assert record.holds
    assert record.theorem_a_holds
    assert record.three_way_m_agreement
    assert record.h_minus == 1
    assert record.bf_torsion_factors == (5, 5)
    assert record.bf_free_rank == 1
    assert record.torsion_order == 25
    assert (record.m_y, record.m_y_plus) == (4, 2)
    assert (record.g_star_y, record.g_star_y_plus) == (100, 10)
    assert record.kernel_index == 2


def test_theorem_a_p23():
    """Test #BF(Y)_tors = 23^11 · 3."""
    record = verify_theorem_a(23)
    assert record.holds
    assert record.h_minus == 3
    assert record.torsion_order == 23 ** 11 * 3


@pytest.mark.parametrize('p', [3, 7, 11, 13, 17, 19])
def test_theorem_a_sweep(p):
    """Test the torsion formula and the three computations of |m(Y)|."""
    record = verify_theorem_a(p)
    assert record.mismatches == []
    assert record.torsion_order == p ** ((p - 1) // 2) * KNOWN_H_MINUS[p]
    assert abs(record.m_y) == record.lattice_m == record.resultant_m


@pytest.mark.slow
def test_theorem_a_all_primes_to_61_within_a_minute():
    """Test the torsion formula, m(Y) agreement and its sign for every odd prime up to 61."""
    start = time.perf_counter()
    records = [verify_theorem_a(p) for p in primerange(3, 62)]
    elapsed = time.perf_counter() - start
    for record in records:
        p = record.p
        assert record.mismatches == [], p
        assert record.torsion_order == p ** ((p - 1) // 2) * KNOWN_H_MINUS[p]
        assert record.h_minus == KNOWN_H_MINUS[p]
        if p <= 41:
            assert abs(record.m_y) == record.lattice_m == record.resultant_m
            assert record.m_y == closed_form_m(p)
            assert (record.m_y > 0) == (p % 4 == 1)
    assert elapsed < 60

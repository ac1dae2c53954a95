"""Stickelberger covers, Bernoulli numbers, minus class numbers and Theorem A data."""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Dict, List, Optional, Tuple

from sympy import isprime
from sympy.ntheory import is_primitive_root, primitive_root

from .bowen_franks import (BFGroupStructure, ZetaReport, bf_operator_from_adjacency, bf_structure,
                           r_invariant_from_adjacency, zeta_report_from_adjacency)
from .config import DEFAULT_SETTINGS, Settings
from .cyclotomic import CyclotomicNumber, evaluate_at_root
from .digraph import Digraph, DigraphMorphism, Edge, GroupAction
from .errors import ConsistencyError, IntegralityError, PreconditionError, PrimeCapError
from .groups import Character, Element, FiniteAbelianGroup, GroupRingElement, Subgroup
from .linalg import IntMatrix, Lattice, invariant_factors, kernel_lattice, lattice_index
from .polynomials import IntPolynomial, binomial_poly, geometric_sum
from .voltage import (VoltageAssignment, derived_adjacency, derived_digraph, derived_is_connected,
                      equivariant_zeta, inflate, intermediate_adjacency)

logger = logging.getLogger(__name__)

# resultant path for h^- above this prime
PRODUCT_PATH_LIMIT = 60


def check_odd_prime(p: int, settings: Optional[Settings] = None) -> None:
    """Raises PreconditionError (or PrimeCapError above the cap) for unusable p."""
    settings = settings or DEFAULT_SETTINGS
    if p < 3 or not isprime(p):
        raise PreconditionError(f"{p} is not an odd prime")
    if p > settings.prime_cap:
        raise PrimeCapError(f"p = {p} exceeds the configured cap {settings.prime_cap}")


def primitive_roots(p: int) -> List[int]:
    """Primitive roots mod p in ascending order."""
    return [g for g in range(2, p) if is_primitive_root(g, p)]


@dataclass(frozen=True)
class UnitGroup:
    """Δ ≅ (Z/p)^× as a cyclic group, σ_a encoded by its discrete log base ``generator``."""
    p: int
    generator: int

    @cached_property
    def group(self) -> FiniteAbelianGroup:
        return FiniteAbelianGroup.cyclic(self.p - 1)

    @cached_property
    def _log(self) -> Dict[int, int]:
        table, x = {}, 1
        for k in range(self.p - 1):
            table[x] = k
            x = x * self.generator % self.p
        return table

    @cached_property
    def _power(self) -> Tuple[int, ...]:
        return tuple(pow(self.generator, k, self.p) for k in range(self.p - 1))

    def sigma(self, a: int) -> Element:
        """Element σ_a."""
        return (self._log[a % self.p],)

    def residue(self, g: Element) -> int:
        """a with σ_a = g."""
        return self._power[g[0] % (self.p - 1)]

    @property
    def complex_conjugation(self) -> Element:
        """j = σ_{-1}."""
        return self.sigma(self.p - 1)

    def plus_subgroup(self) -> Subgroup:
        return self.group.subgroup([self.complex_conjugation])

    def character(self, j: int) -> Character:
        """ψ_j with ψ_j(σ_generator) = ζ^j."""
        return Character(self.group, (j,))

    def odd_characters(self) -> List[Character]:
        return [self.character(j) for j in range(1, self.p - 1, 2)]


def unit_group(p: int, generator: Optional[int] = None) -> UnitGroup:
    """Δ for the prime p; the smallest primitive root unless given.

    Raises:
        PreconditionError: If p is not an odd prime or generator is not primitive
    """
    if p < 3 or not isprime(p):
        raise PreconditionError(f"{p} is not an odd prime")
    if generator is None:
        generator = int(primitive_root(p))
    elif not is_primitive_root(generator % p, p):
        raise PreconditionError(f"{generator} is not a primitive root mod {p}")
    return UnitGroup(p, generator % p)


def stickelberger_element(p: int, generator: Optional[int] = None) -> GroupRingElement:
    """pθ = -Σ_{i=1}^{p-1} i σ_i^{-1} in Z[Δ]."""
    units = unit_group(p, generator)
    return GroupRingElement(units.group, tuple((units.sigma(pow(i, -1, p)), -i) for i in range(1, p)))


@dataclass(frozen=True)
class StickelbergerCover:
    """Derived digraph of the bouquet voltage whose equivariant zeta at 1 is pθ."""
    p: int
    generator: int
    base: Digraph
    voltage: VoltageAssignment

    @property
    def group(self) -> FiniteAbelianGroup:
        return self.voltage.group

    @property
    def units(self) -> UnitGroup:
        return UnitGroup(self.p, self.generator)

    @cached_property
    def _derived(self) -> Tuple[Digraph, DigraphMorphism, GroupAction]:
        return derived_digraph(self.voltage)

    @property
    def derived(self) -> Digraph:
        return self._derived[0]

    @property
    def projection(self) -> DigraphMorphism:
        return self._derived[1]

    @property
    def action(self) -> GroupAction:
        return self._derived[2]

    def adjacency(self) -> IntMatrix:
        """Adjacency of the derived digraph, computed from the voltages."""
        return derived_adjacency(self.voltage)

    def plus_adjacency(self) -> IntMatrix:
        """Adjacency of Y+ = Y / <j>."""
        return intermediate_adjacency(self.voltage, self.units.plus_subgroup())


def stickelberger_cover(p: int, generator: Optional[int] = None,
                        settings: Optional[Settings] = None) -> StickelbergerCover:
    """Bouquet with p(p-1)/2 + 1 loops and voltages σ_1, and i loops σ_i^{-1} for each i.

    Raises:
        PreconditionError: If p is not an odd prime
        PrimeCapError: If p exceeds the configured cap
        ConsistencyError: If γ(1) differs from pθ or the cover is disconnected
    """
    check_odd_prime(p, settings)
    units = unit_group(p, generator)
    edges = [Edge('e0', 0, 0)]
    labels = [units.sigma(1)]
    for i in range(1, p):
        inverse = units.sigma(pow(i, -1, p))
        for k in range(1, i + 1):
            edges.append(Edge(f"e{i}_{k}", 0, 0))
            labels.append(inverse)
    base = Digraph(('v',), tuple(edges))
    voltage = VoltageAssignment(base, units.group, tuple(labels))
    if not derived_is_connected(voltage):
        raise ConsistencyError(f"Stickelberger cover for p = {p} is not strongly connected")
    gamma_at_one = equivariant_zeta(voltage, settings).evaluate(1)
    if gamma_at_one != stickelberger_element(p, units.generator):
        raise ConsistencyError(f"γ(1) differs from pθ for p = {p}")
    logger.debug("Built Stickelberger cover for p = %d over a bouquet with %d loops", p, len(edges))
    return StickelbergerCover(p, units.generator, base, voltage)


def bernoulli_b1(p: int, psi: Character, units: Optional[UnitGroup] = None) -> CyclotomicNumber:
    """B_{1,ψ} = (1/p) Σ_{i=1}^{p-1} i ψ(σ_i).

    Raises:
        PreconditionError: For the trivial character
    """
    units = units or unit_group(p)
    if psi.group != units.group:
        raise PreconditionError("Character is not a character of (Z/p)^x")
    if psi.is_trivial:
        raise PreconditionError("B_1 is defined for nontrivial characters only")
    total = CyclotomicNumber.zero(psi.field_order)
    for i in range(1, p):
        total = total + psi.value(units.sigma(i)) * i
    return total / p


def _minus_class_number_product(p: int, units: UnitGroup) -> Fraction:
    value = Fraction(2 * p)
    product = CyclotomicNumber.one(p - 1)
    for psi in units.odd_characters():
        product = product * (bernoulli_b1(p, psi.inverse(), units) * Fraction(-1, 2))
    if not product.is_rational:
        raise IntegralityError(f"Odd-character Bernoulli product for p = {p} is irrational")
    return value * product.to_fraction()


def circulant_poly(p: int, generator: Optional[int] = None) -> IntPolynomial:
    """f(x) = Σ_k [g^{-k}] x^k, k = 0..p-2.

    Raises:
        PreconditionError: If generator is not a primitive root mod p
    """
    units = unit_group(p, generator)
    inverse = pow(units.generator, -1, p)
    return IntPolynomial(tuple(pow(inverse, k, p) for k in range(p - 1)))


def circulant_matrix(p: int, generator: Optional[int] = None) -> IntMatrix:
    """Bowen-Franks operator in the basis {τ^k}: entry (r, c) = -[g^(c-r)]."""
    units = unit_group(p, generator)
    n = p - 1
    return IntMatrix.from_rows(
        [[-pow(units.generator, (c - r) % n, p) for c in range(n)] for r in range(n)])


def odd_character_resultant(p: int, units: UnitGroup) -> int:
    """Res(x^{(p-1)/2} + 1, f) = Π_{j odd} f(ζ^j)."""
    return binomial_poly((p - 1) // 2, 1).resultant(circulant_poly(p, units.generator))


def _minus_class_number_resultant(p: int, units: UnitGroup) -> Fraction:
    d = (p - 1) // 2
    return Fraction(2 * p * (-1) ** d * odd_character_resultant(p, units), (2 * p) ** d)


def minus_class_number(p: int, method: str = 'auto', generator: Optional[int] = None) -> int:
    """h^-(Q(ζ_p)) = 2p Π_{ψ odd} (-B_{1,ψ^{-1}} / 2).

    Args:
        p: Odd prime
        method: 'product' (exact cyclotomic product), 'resultant' or 'auto'
        generator: Primitive root fixing the character labelling
    Returns:
        The minus class number
    Raises:
        IntegralityError: If the value is not a positive integer
    """
    units = unit_group(p, generator)
    if method == 'auto':
        method = 'product' if p <= PRODUCT_PATH_LIMIT else 'resultant'
    if method == 'product':
        value = _minus_class_number_product(p, units)
    elif method == 'resultant':
        value = _minus_class_number_resultant(p, units)
    else:
        raise ValueError(f"Unknown method '{method}'")
    if value.denominator != 1 or value <= 0:
        raise IntegralityError(f"h^- for p = {p} evaluated to {value}")
    return int(value)


def m_via_resultant(p: int) -> int:
    """|Res(g, k)| with g = 1 + ... + x^{(p-3)/2} and k = (x - 1)(x^{(p-1)/2} + 1)."""
    if p < 3 or not isprime(p):
        raise PreconditionError(f"{p} is not an odd prime")
    d = (p - 1) // 2
    g = geometric_sum(d)
    k = IntPolynomial.of(-1, 1) * binomial_poly(d, 1)
    return abs(g.resultant(k))


def closed_form_m(p: int) -> int:
    """m(Y) = (-1)^{(p-1)/2} 2^{(p-3)/2} (p-1)/2."""
    return (-1) ** ((p - 1) // 2) * 2 ** ((p - 3) // 2) * ((p - 1) // 2)


def closed_form_m_plus(p: int) -> int:
    """m(Y+) = (-1)^{(p-1)/2} (p-1)/2."""
    return (-1) ** ((p - 1) // 2) * ((p - 1) // 2)


@dataclass
class PlusPartReport:
    """Bowen-Franks and zeta data of Y+ against their closed forms."""
    p: int
    bf: BFGroupStructure
    zeta: ZetaReport
    gamma_at_one: Dict[str, int]
    holds: bool
    mismatches: List[str] = field(default_factory=list)

    @property
    def m(self) -> Optional[int]:
        return self.zeta.m

    def to_dict(self) -> Dict:
        return {
            'p': self.p,
            'bf_free_rank': self.bf.free_rank,
            'bf_torsion_factors': list(self.bf.torsion_factors),
            'g_star': self.zeta.special_value,
            'm': self.zeta.m,
            'gamma_at_one': dict(self.gamma_at_one),
            'holds': self.holds,
            'mismatches': list(self.mismatches),
        }


def plus_quotient_analysis(p: int, settings: Optional[Settings] = None,
                           cover: Optional[StickelbergerCover] = None) -> PlusPartReport:
    """Analyse Y+ = Y_<j> and compare with the closed forms for its BF group, g* and m."""
    cover = cover or stickelberger_cover(p, settings=settings)
    sign = (-1) ** ((p - 1) // 2)
    zeta = zeta_report_from_adjacency(cover.plus_adjacency(), settings)
    bf = zeta.bf
    mismatches = []
    if bf.free_rank != (p - 3) // 2 or bf.torsion_factors != (p,):
        mismatches.append(f"BF(Y+) = Z^{bf.free_rank} + {bf.torsion_factors}, expected Z^{(p - 3) // 2} + ({p},)")
    if zeta.special_value != sign * (p - 1) // 2 * p:
        mismatches.append(f"g*(1) = {zeta.special_value}, expected {sign * (p - 1) // 2 * p}")
    if zeta.m != closed_form_m_plus(p):
        mismatches.append(f"m(Y+) = {zeta.m}, expected {closed_form_m_plus(p)}")
    inflated, quotient = inflate(equivariant_zeta(cover.voltage, settings), cover.units.plus_subgroup())
    gamma_at_one = inflated.evaluate(1)
    if gamma_at_one != GroupRingElement.norm_element(quotient) * (-p):
        mismatches.append(f"γ(Y+/X)(1) = {gamma_at_one.to_json()}, expected -{p}·N")
    return PlusPartReport(p, bf, zeta, gamma_at_one.to_json(), not mismatches, mismatches)


def minus_cokernel_order(p: int, generator: Optional[int] = None) -> int:
    """Order of the cokernel of BF restricted to (1 - j)ZV_Y, in the basis τ^k - τ^{k+d}."""
    d = (p - 1) // 2
    if d == 0:
        return 1
    m = circulant_matrix(p, generator)
    rows = []
    for k in range(d):
        column = m.apply([1 if i == k else (-1 if i == k + d else 0) for i in range(p - 1)])
        rows.append(column[:d])
    return abs(IntMatrix.from_rows(rows).transpose().determinant())


def plus_kernel_index(p: int, cover: StickelbergerCover) -> int:
    """[ker BF(Y+) : f(ker BF(Y))] for the projection f: Y -> Y+."""
    plus = cover.units.plus_subgroup()
    ker_y = kernel_lattice(bf_operator_from_adjacency(cover.adjacency()))
    ker_plus = kernel_lattice(bf_operator_from_adjacency(cover.plus_adjacency()))
    k = len(plus.coset_representatives)
    pushed = []
    for vector in ker_y.vectors():
        image = [0] * k
        for position, x in enumerate(vector):
            image[plus.coset_index[(position,)]] += x
        pushed.append(image)
    return lattice_index(ker_plus, Lattice.span(pushed, k))


@dataclass
class TheoremARecord:
    """Torsion of BF(Y) against p^{(p-1)/2} h^-, with the three computations of |m(Y)|."""
    p: int
    generator: int
    h_minus: int
    bf_torsion_factors: Tuple[int, ...]
    bf_free_rank: int
    torsion_order: int
    circulant_torsion_order: int
    m_y: Optional[int]
    m_y_plus: Optional[int]
    g_star_y: int
    g_star_y_plus: int
    lattice_m: int
    resultant_m: int
    closed_form_m: int
    kernel_index: int
    minus_cokernel_order: int
    theorem_a_holds: bool
    three_way_m_agreement: bool
    mismatches: List[str] = field(default_factory=list)

    @property
    def holds(self) -> bool:
        return not self.mismatches

    def to_dict(self) -> Dict:
        data = dict(self.__dict__)
        data['bf_torsion_factors'] = list(self.bf_torsion_factors)
        data['mismatches'] = list(self.mismatches)
        data['holds'] = self.holds
        return data


def verify_theorem_a(p: int, settings: Optional[Settings] = None,
                     generator: Optional[int] = None) -> TheoremARecord:
    """Check #BF(Y)_tors = p^{(p-1)/2} h^- and the agreement of all |m(Y)| computations.

    Mismatches never raise; they are listed in the record.
    """
    settings = settings or DEFAULT_SETTINGS
    cover = stickelberger_cover(p, generator, settings)
    adjacency = cover.adjacency()
    h_minus = minus_class_number(p, generator=cover.generator)
    zeta = zeta_report_from_adjacency(adjacency, settings)
    bf = zeta.bf
    circulant = circulant_matrix(p, cover.generator)
    circulant_bf = BFGroupStructure.from_invariant_factors(invariant_factors(circulant), p - 1)
    plus = plus_quotient_analysis(p, settings, cover)
    lattice_m = r_invariant_from_adjacency(adjacency, settings)
    resultant_m = m_via_resultant(p)
    closed = closed_form_m(p)
    kernel_index = plus_kernel_index(p, cover)
    minus_order = minus_cokernel_order(p, cover.generator)
    odd_product = abs(odd_character_resultant(p, cover.units))

    mismatches = []
    expected = p ** ((p - 1) // 2) * h_minus
    theorem_a = bf.torsion_order == expected and circulant_bf == bf
    if bf.torsion_order != expected:
        mismatches.append(f"#BF(Y)_tors = {bf.torsion_order}, expected {expected}")
    if circulant_bf != bf:
        mismatches.append(f"circulant BF {circulant_bf} differs from derived BF {bf}")
    if circulant != bf_operator_from_adjacency(adjacency):
        mismatches.append("circulant matrix differs from the Bowen-Franks operator")
    if bf.free_rank != (p - 3) // 2:
        mismatches.append(f"free rank {bf.free_rank}, expected {(p - 3) // 2}")
    three_way = (zeta.m is not None and abs(zeta.m) == lattice_m == resultant_m == abs(closed)
                 and zeta.m == closed)
    if not three_way:
        mismatches.append(f"m(Y): zeta {zeta.m}, lattice {lattice_m}, resultant {resultant_m}, closed form {closed}")
    mismatches.extend(plus.mismatches)
    if kernel_index != 2 ** ((p - 3) // 2):
        mismatches.append(f"kernel index {kernel_index}, expected {2 ** ((p - 3) // 2)}")
    if minus_order != odd_product:
        mismatches.append(f"minus cokernel order {minus_order}, expected {odd_product}")
    logger.info("Theorem A at p = %d: torsion %d, h^- = %d, %s", p, bf.torsion_order, h_minus,
                'ok' if not mismatches else 'MISMATCH')
    return TheoremARecord(
        p=p, generator=cover.generator, h_minus=h_minus,
        bf_torsion_factors=bf.torsion_factors, bf_free_rank=bf.free_rank,
        torsion_order=bf.torsion_order, circulant_torsion_order=circulant_bf.torsion_order,
        m_y=zeta.m, m_y_plus=plus.m, g_star_y=zeta.special_value,
        g_star_y_plus=plus.zeta.special_value, lattice_m=lattice_m, resultant_m=resultant_m,
        closed_form_m=closed, kernel_index=kernel_index, minus_cokernel_order=minus_order,
        theorem_a_holds=theorem_a, three_way_m_agreement=three_way, mismatches=mismatches)


def eigenvalue_check(p: int, generator: Optional[int] = None) -> List[str]:
    """Compare -f(ζ^j) with -p(p-1)/2, 0 or -pB_{1,ψ_j^{-1}}; returns the failing cases."""
    units = unit_group(p, generator)
    f = circulant_poly(p, units.generator)
    failures = []
    for j in range(p - 1):
        value = -evaluate_at_root(f, p - 1, j)
        if j == 0:
            expected = CyclotomicNumber.from_int(p - 1, -p * (p - 1) // 2)
        elif j % 2 == 0:
            expected = CyclotomicNumber.zero(p - 1)
        else:
            expected = bernoulli_b1(p, units.character(j).inverse(), units) * (-p)
        if value != expected:
            failures.append(f"j = {j}: {value} != {expected}")
    return failures

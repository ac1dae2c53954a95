"""Bowen-Franks groups, zeta special values and cover divisibilities."""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .config import DEFAULT_SETTINGS, Settings
from .digraph import (Digraph, DigraphMorphism, adjacency_matrix, check_cover,
                      matrix_is_strongly_connected, pushforward_matrix)
from .errors import IntegralityError, PreconditionError
from .linalg import (IntMatrix, SNFResult, image_lattice, kernel_and_image_saturation,
                     lattice_index, smith_normal_form)
from .polynomials import IntPolynomial, reversed_char_poly, taylor_at_one

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BFGroupStructure:
    """Cokernel of the Bowen-Franks operator: Z^free_rank ⊕ ⊕ Z/d."""
    free_rank: int
    torsion_factors: Tuple[int, ...]

    @property
    def torsion_order(self) -> int:
        order = 1
        for d in self.torsion_factors:
            order *= d
        return order

    @classmethod
    def from_invariant_factors(cls, factors: Tuple[int, ...], size: int) -> 'BFGroupStructure':
        nonzero = [d for d in factors if d != 0]
        return cls(size - len(nonzero), tuple(d for d in nonzero if d > 1))

    def to_dict(self) -> Dict:
        return {
            'free_rank': self.free_rank,
            'torsion_factors': list(self.torsion_factors),
            'torsion_order': self.torsion_order,
        }


@dataclass(frozen=True)
class ZetaReport:
    """Zeta data of a strongly connected digraph."""
    g: IntPolynomial
    r: int
    special_value: int
    delta: int
    m: Optional[int]
    bf: BFGroupStructure

    def to_dict(self) -> Dict:
        return {
            'g_coeffs': list(self.g.coefficients),
            'r': self.r,
            'special_value': self.special_value,
            'delta': self.delta,
            'm': self.m,
            'bf_rank': self.bf.free_rank,
            'bf_torsion_factors': list(self.bf.torsion_factors),
        }


def bf_operator(d: Digraph) -> IntMatrix:
    """Bowen-Franks operator I - A in construction vertex order."""
    return bf_operator_from_adjacency(adjacency_matrix(d))


def bf_operator_from_adjacency(a: IntMatrix) -> IntMatrix:
    return IntMatrix.identity(a.rows) - a


def bf_structure(operator: IntMatrix) -> BFGroupStructure:
    """Cokernel structure of a square integer operator."""
    snf = smith_normal_form(operator)
    return BFGroupStructure.from_invariant_factors(snf.invariant_factors, operator.rows)


def bf_group(d: Digraph) -> BFGroupStructure:
    """Structure of BF(X) = coker(I - A)."""
    return bf_structure(bf_operator(d))


def zeta_report_from_adjacency(a: IntMatrix, settings: Optional[Settings] = None) -> ZetaReport:
    """Zeta report for the digraph with adjacency matrix ``a``.

    Raises:
        PreconditionError: If the digraph is not strongly connected
        IntegralityError: If δ = 0 and the torsion order does not divide g*(1)
    """
    settings = settings or DEFAULT_SETTINGS
    if not matrix_is_strongly_connected(a):
        raise PreconditionError("Zeta data is defined for strongly connected digraphs only")
    g = reversed_char_poly(a, settings=settings)
    r, special, _ = taylor_at_one(g)
    bf = bf_structure(bf_operator_from_adjacency(a))
    delta = r - bf.free_rank
    if delta < 0:
        raise IntegralityError(f"Vanishing order {r} below Bowen-Franks rank {bf.free_rank}")
    m = None
    if delta == 0:
        if special % bf.torsion_order:
            raise IntegralityError(
                f"g*(1) = {special} is not divisible by #BF_tors = {bf.torsion_order}")
        m = special // bf.torsion_order
    else:
        logger.info("Defective digraph: r = %d, Bowen-Franks rank %d", r, bf.free_rank)
    return ZetaReport(g, r, special, delta, m, bf)


def zeta_report(d: Digraph, settings: Optional[Settings] = None) -> ZetaReport:
    """g(u) = det(I - Au), vanishing order r and special value at u = 1, δ and m."""
    return zeta_report_from_adjacency(adjacency_matrix(d), settings)


def r_invariant_from_adjacency(a: IntMatrix, settings: Optional[Settings] = None) -> int:
    """Lattice index [BF(ZV) : BF(L)] with L the saturated image of BF.

    Raises:
        PreconditionError: If δ ≠ 0
    """
    report = zeta_report_from_adjacency(a, settings)
    if report.delta != 0:
        raise PreconditionError(f"The lattice index needs δ = 0, got δ = {report.delta}")
    operator = bf_operator_from_adjacency(a)
    _, saturated = kernel_and_image_saturation(operator)
    return lattice_index(image_lattice(operator), saturated.image(operator))


def r_invariant_m(d: Digraph, settings: Optional[Settings] = None) -> int:
    """|m(X)| computed as the index of BF(L(X)) in BF(ZV_X)."""
    return r_invariant_from_adjacency(adjacency_matrix(d), settings)


def _divides(a: int, b: int) -> bool:
    return b == 0 if a == 0 else b % a == 0


def _ratio(a: int, b: int) -> Optional[int]:
    return b // a if a and b % a == 0 else None


@dataclass
class CoverDivisibilityReport:
    """Divisibilities induced by a cover f: Y -> X."""
    g_star_divides: bool
    g_star_ratio: Optional[int]
    r_source: int
    r_target: int
    m_divides: Optional[bool] = None
    m_ratio: Optional[int] = None
    torsion_divides: Optional[bool] = None
    torsion_ratio: Optional[int] = None
    torsion_surjective: Optional[bool] = None
    notes: List[str] = field(default_factory=list)

    def to_dict(self) -> Dict:
        return dict(self.__dict__)


def _torsion_generators(snf: SNFResult) -> List[Tuple[int, ...]]:
    """Vectors whose classes generate the torsion of coker: columns of left^-1."""
    inverse = snf.left_transform.unimodular_inverse().to_rows()
    return [tuple(row[i] for row in inverse)
            for i, d in enumerate(snf.invariant_factors) if d > 1]


def induced_torsion_surjective(f: DigraphMorphism) -> bool:
    """Whether BF(Y)_tors -> BF(X)_tors induced by f on vertices is onto.

    Both cokernels are written in Smith coordinates; the images of the torsion
    generators of Y, together with the relations of X, must span the torsion
    coordinates of X.
    """
    snf_y = smith_normal_form(bf_operator(f.source))
    snf_x = smith_normal_form(bf_operator(f.target))
    torsion_x = [(i, d) for i, d in enumerate(snf_x.invariant_factors) if d > 1]
    if not torsion_x:
        return True
    push = pushforward_matrix(f)
    left_x = snf_x.left_transform
    rows = []
    for generator in _torsion_generators(snf_y):
        coords = left_x.apply(push.apply(generator))
        rows.append([coords[i] for i, _ in torsion_x])
    for k, (_, d) in enumerate(torsion_x):
        rows.append([d if j == k else 0 for j in range(len(torsion_x))])
    cokernel = smith_normal_form(IntMatrix.from_rows(rows, cols=len(torsion_x)))
    return all(d == 1 for d in cokernel.invariant_factors)


def cover_divisibility_report(f: DigraphMorphism,
                              settings: Optional[Settings] = None) -> CoverDivisibilityReport:
    """Check the divisibilities a cover imposes on special values, m and torsion.

    Raises:
        PreconditionError: If f is not a cover of strongly connected digraphs
    """
    if not check_cover(f):
        raise PreconditionError("Divisibility report needs a covering morphism")
    source = zeta_report(f.source, settings)
    target = zeta_report(f.target, settings)
    report = CoverDivisibilityReport(
        g_star_divides=_divides(target.special_value, source.special_value),
        g_star_ratio=_ratio(target.special_value, source.special_value),
        r_source=source.r, r_target=target.r)
    if source.delta == 0 and target.delta == 0:
        report.m_divides = _divides(target.m, source.m)
        report.m_ratio = _ratio(target.m, source.m)
        if source.r == target.r:
            report.torsion_divides = _divides(target.bf.torsion_order, source.bf.torsion_order)
            report.torsion_ratio = _ratio(target.bf.torsion_order, source.bf.torsion_order)
            report.torsion_surjective = induced_torsion_surjective(f)
        else:
            report.notes.append(f"r differs ({source.r} vs {target.r}); torsion divisibility not implied")
    else:
        report.notes.append("δ ≠ 0 on one side; m divisibility not implied")
    return report

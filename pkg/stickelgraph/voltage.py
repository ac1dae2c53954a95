"""Voltage assignments, derived digraphs and equivariant zeta functions."""

import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from .config import DEFAULT_SETTINGS, Settings
from .cyclotomic import CyclotomicNumber, CyclotomicPolynomial
from .digraph import (Digraph, DigraphMorphism, Edge, GroupAction, adjacency_matrix,
                      is_strongly_connected, matrix_is_strongly_connected)
from .errors import PreconditionError
from .groups import (Character, Element, FiniteAbelianGroup, GroupRingElement,
                     GroupRingPolynomial, Subgroup, group_ring_determinant, quotient_group)
from .linalg import IntMatrix
from .polynomials import reversed_char_poly, taylor_at_one

logger = logging.getLogger(__name__)


def element_label(g: Element) -> str:
    return ','.join(str(x) for x in g)


@dataclass(frozen=True)
class VoltageAssignment:
    """Labelling of the base edges by elements of a finite abelian group.

    ``labels[k]`` is the voltage of the k-th base edge.
    """
    base: Digraph
    group: FiniteAbelianGroup
    labels: Tuple[Element, ...]

    def __post_init__(self):
        if len(self.labels) != self.base.num_edges:
            raise PreconditionError(
                f"Expected {self.base.num_edges} voltages, got {len(self.labels)}")
        object.__setattr__(self, 'labels', tuple(self.group.reduce(g) for g in self.labels))

    @classmethod
    def from_mapping(cls, base: Digraph, group: FiniteAbelianGroup,
                     labels: Mapping[str, Sequence[int]]) -> 'VoltageAssignment':
        """Build from a map edge label -> voltage vector.

        Raises:
            PreconditionError: If some base edge has no voltage
        """
        missing = [e.label for e in base.edges if e.label not in labels]
        if missing:
            raise PreconditionError(f"Edges without voltage: {', '.join(missing)}")
        return cls(base, group, tuple(tuple(labels[e.label]) for e in base.edges))

    def aggregated(self) -> Counter:
        """Multiplicities of (origin, target, voltage) triples."""
        return Counter((e.origin, e.target, g) for e, g in zip(self.base.edges, self.labels))


def derived_digraph(v: VoltageAssignment) -> Tuple[Digraph, DigraphMorphism, GroupAction]:
    """Derived digraph X(G, α) with its projection cover and translation action.

    Vertex (w, σ) has index w·|G| + index(σ); edge (e, σ) runs from (o(e), σ)
    to (t(e), σ + α(e)).

    Args:
        v: Voltage assignment
    Returns:
        (derived digraph, projection onto the base, left translation action)
    """
    base, group = v.base, v.group
    elements = group.elements
    n = group.order

    def vertex(w: int, g: Element) -> int:
        return w * n + group.element_index(g)

    vertices = tuple(f"{label}@{element_label(g)}" for label in base.vertex_labels for g in elements)
    edges = []
    for e, alpha in zip(base.edges, v.labels):
        for g in elements:
            edges.append(Edge(f"{e.label}@{element_label(g)}",
                              vertex(e.origin, g), vertex(e.target, group.add(g, alpha))))
    derived = Digraph(vertices, tuple(edges))
    projection = DigraphMorphism(
        derived, base,
        tuple(w for w in range(base.num_vertices) for _ in elements),
        tuple(k for k in range(base.num_edges) for _ in elements))

    def shift(h: Element, index: int) -> int:
        block, position = divmod(index, n)
        return block * n + group.element_index(group.add(h, elements[position]))

    action = GroupAction.from_callables(group, derived, shift, shift)
    return derived, projection, action


def derived_adjacency(v: VoltageAssignment) -> IntMatrix:
    """Adjacency matrix of X(G, α) computed from the voltages without building edges."""
    group = v.group
    n = group.order
    a = np.zeros((v.base.num_vertices * n, v.base.num_vertices * n), dtype=object)
    for (o, t, alpha), mult in v.aggregated().items():
        for i, g in enumerate(group.elements):
            a[t * n + group.element_index(group.add(g, alpha)), o * n + i] += mult
    return IntMatrix.from_numpy(a)


def closed_path_subgroup(v: VoltageAssignment) -> Subgroup:
    """Subgroup generated by voltages of closed paths through the first base vertex.

    Uses out- and in-trees rooted at that vertex: every edge e: u -> w gives the
    closed walk (tree path to u) e (tree path back from w).
    """
    base, group = v.base, v.group
    if not is_strongly_connected(base):
        raise PreconditionError("Voltage connectivity needs a strongly connected base")
    # voltage of some path root -> w, and of some path w -> root
    forward: Dict[int, Element] = {0: group.identity}
    frontier = [0]
    while frontier:
        nxt = []
        for u in frontier:
            for k in base.out_edges[u]:
                w = base.edges[k].target
                if w not in forward:
                    forward[w] = group.add(forward[u], v.labels[k])
                    nxt.append(w)
        frontier = nxt
    backward: Dict[int, Element] = {0: group.identity}
    frontier = [0]
    while frontier:
        nxt = []
        for w in frontier:
            for k in base.in_edges[w]:
                u = base.edges[k].origin
                if u not in backward:
                    backward[u] = group.add(v.labels[k], backward[w])
                    nxt.append(u)
        frontier = nxt
    generators = [group.add(forward[w], backward[w]) for w in range(base.num_vertices)]
    for k, e in enumerate(base.edges):
        generators.append(group.add(group.add(forward[e.origin], v.labels[k]), backward[e.target]))
    return group.subgroup(generators)


def derived_is_connected(v: VoltageAssignment) -> bool:
    """Strong connectivity of X(G, α), checked two ways.

    Raises:
        ArithmeticError: If the direct check and the voltage subgroup disagree
    """
    direct = matrix_is_strongly_connected(derived_adjacency(v))
    via_voltages = closed_path_subgroup(v).order == v.group.order
    if direct != via_voltages:
        raise ArithmeticError(
            f"Connectivity mismatch: direct {direct}, closed-path voltages {via_voltages}")
    return direct


def intermediate_quotient(v: VoltageAssignment, h: Subgroup) -> Digraph:
    """The digraph X(G, H, α) on V × (H\\G) with t(e, Hσ) = (t(e), Hσα(e)).

    Cosets are ordered by their lexicographically minimal representative.

    Raises:
        PreconditionError: If h is not a subgroup of the voltage group
    """
    if h.group != v.group:
        raise PreconditionError("Subgroup of a different group")
    base, group = v.base, v.group
    reps = h.coset_representatives
    k = len(reps)
    vertices = tuple(f"{label}@{element_label(c)}" for label in base.vertex_labels for c in reps)
    edges = []
    for e, alpha in zip(base.edges, v.labels):
        for i, c in enumerate(reps):
            edges.append(Edge(f"{e.label}@{element_label(c)}", e.origin * k + i,
                              e.target * k + h.coset_index[group.add(c, alpha)]))
    return Digraph(vertices, tuple(edges))


def intermediate_adjacency(v: VoltageAssignment, h: Subgroup) -> IntMatrix:
    """Adjacency matrix of X(G, H, α) without building edges."""
    if h.group != v.group:
        raise PreconditionError("Subgroup of a different group")
    reps = h.coset_representatives
    k = len(reps)
    a = np.zeros((v.base.num_vertices * k, v.base.num_vertices * k), dtype=object)
    for (o, t, alpha), mult in v.aggregated().items():
        for i, c in enumerate(reps):
            a[t * k + h.coset_index[v.group.add(c, alpha)], o * k + i] += mult
    return IntMatrix.from_numpy(a)


def voltage_adjacency(v: VoltageAssignment) -> List[List[GroupRingElement]]:
    """Group-ring adjacency A_α with λ_ij the sum of voltages of edges v_j -> v_i."""
    n = v.base.num_vertices
    entries: List[List[Dict[Element, int]]] = [[{} for _ in range(n)] for _ in range(n)]
    for (o, t, alpha), mult in v.aggregated().items():
        cell = entries[t][o]
        cell[alpha] = cell.get(alpha, 0) + mult
    return [[GroupRingElement.from_dict(v.group, cell) for cell in row] for row in entries]


def _zeta_from_group_adjacency(matrix: Sequence[Sequence[GroupRingElement]],
                               group: FiniteAbelianGroup,
                               settings: Settings) -> GroupRingPolynomial:
    n = len(matrix)
    one = GroupRingElement.scalar(group, 1)
    zero = GroupRingElement.zero(group)
    shifted = [[GroupRingPolynomial(group, (one if i == j else zero, -matrix[i][j]))
                for j in range(n)] for i in range(n)]
    gamma = group_ring_determinant(shifted, group, settings.cofactor_warn_size)
    if gamma.coefficient(0) != one:
        raise ArithmeticError("Equivariant zeta must have constant term 1")
    return gamma


def equivariant_zeta(v: VoltageAssignment, settings: Optional[Settings] = None) -> GroupRingPolynomial:
    """γ(u) = det(I - A_α u) over Z[G][u].

    Raises:
        PreconditionError: If the derived digraph is not strongly connected
    """
    settings = settings or DEFAULT_SETTINGS
    if not derived_is_connected(v):
        raise PreconditionError("Equivariant zeta needs a strongly connected derived digraph")
    return _zeta_from_group_adjacency(voltage_adjacency(v), v.group, settings)


def equivariant_zeta_of_action(d: Digraph, action: GroupAction,
                               subgroup: Optional[Subgroup] = None,
                               settings: Optional[Settings] = None) -> GroupRingPolynomial:
    """γ(u) for a digraph with a vertex-free action, read off orbit representatives.

    With orbit representatives w_1..w_n, the out-edges of w_j ending at g·w_i
    contribute g to entry (i, j). Restricting to a subgroup H gives γ over Z[H],
    represented inside Z[G].

    Raises:
        PreconditionError: If the action is not vertex-free or d is not strongly connected
    """
    settings = settings or DEFAULT_SETTINGS
    group = action.group
    members = sorted(subgroup.elements) if subgroup is not None else list(group.elements)
    located: Dict[int, Tuple[int, Element]] = {}
    reps: List[int] = []
    for w in range(d.num_vertices):
        if w in located:
            continue
        for g in members:
            image = action.act_vertex(g, w)
            if image in located:
                raise PreconditionError("Action restricted to the subgroup is not vertex-free")
            located[image] = (len(reps), g)
        reps.append(w)
    if not is_strongly_connected(d):
        raise PreconditionError("Equivariant zeta needs a strongly connected digraph")
    n = len(reps)
    entries: List[List[Dict[Element, int]]] = [[{} for _ in range(n)] for _ in range(n)]
    for j, w in enumerate(reps):
        for k in d.out_edges[w]:
            i, g = located[d.edges[k].target]
            entries[i][j][g] = entries[i][j].get(g, 0) + 1
    matrix = [[GroupRingElement.from_dict(group, cell) for cell in row] for row in entries]
    return _zeta_from_group_adjacency(matrix, group, settings)


def character_L(gamma: GroupRingPolynomial, psi: Character) -> CyclotomicPolynomial:
    """L-factor ψ(γ(u)), coefficientwise.

    Raises:
        PreconditionError: If ψ is a character of another group
    """
    if psi.group != gamma.group:
        raise PreconditionError("Character of a different group")
    return CyclotomicPolynomial(psi.field_order, tuple(psi.apply(c) for c in gamma.coefficients))


def inflate(gamma: GroupRingPolynomial, h: Subgroup) -> Tuple[GroupRingPolynomial, FiniteAbelianGroup]:
    """Coefficientwise projection Z[G][u] -> Z[G/H][u]."""
    quotient, project = quotient_group(gamma.group, h)
    return gamma.map_coefficients(lambda c: c.map_group(quotient, project), quotient), quotient


def induction_norm(gamma: GroupRingPolynomial, h: Subgroup,
                   settings: Optional[Settings] = None) -> GroupRingPolynomial:
    """Norm from Z[G][u] to Z[H][u]: determinant of multiplication by γ.

    Z[G] is free over Z[H] on the lexicographically minimal coset
    representatives c_1..c_k; g·c_j = h·c_i with h in H gives entry (i, j).
    The result lies in Z[H][u], represented inside Z[G][u].
    """
    settings = settings or DEFAULT_SETTINGS
    group = gamma.group
    if h.group != group:
        raise PreconditionError("Subgroup of a different group")
    reps = h.coset_representatives
    k = len(reps)
    cells: List[List[List[Dict[Element, int]]]] = [
        [[{} for _ in range(len(gamma.coefficients))] for _ in range(k)] for _ in range(k)]
    for degree, coeff in enumerate(gamma.coefficients):
        for g, c in coeff.terms:
            for j, rep in enumerate(reps):
                moved = group.add(g, rep)
                i = h.coset_index[moved]
                inner = group.add(moved, group.neg(reps[i]))
                cell = cells[i][j][degree]
                cell[inner] = cell.get(inner, 0) + c
    matrix = [[GroupRingPolynomial(group, tuple(GroupRingElement.from_dict(group, d) for d in poly))
               for poly in row] for row in cells]
    return group_ring_determinant(matrix, group, settings.cofactor_warn_size)


@dataclass
class ProductDecompositionReport:
    """Outcome of checking g_Y(u) = g_X(u) · ∏_{ψ ≠ 1} ψ(γ(u))."""
    holds: bool
    r_derived: int
    r_base: int
    r_by_character: Dict[str, int] = field(default_factory=dict)
    trivial_matches_base: bool = True
    difference: List[str] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.holds

    def to_dict(self) -> Dict:
        return {
            'holds': self.holds,
            'r_derived': self.r_derived,
            'r_base': self.r_base,
            'r_by_character': dict(self.r_by_character),
            'trivial_matches_base': self.trivial_matches_base,
            'difference': list(self.difference),
        }


def product_decomposition_check(v: VoltageAssignment,
                                settings: Optional[Settings] = None) -> ProductDecompositionReport:
    """Verify the character factorisation of g_Y exactly in Q(ζ_e)[u].

    Also checks r_Y = r_X + Σ r(ψ) and that the trivial character recovers g_X.
    """
    settings = settings or DEFAULT_SETTINGS
    gamma = equivariant_zeta(v, settings)
    e = v.group.exponent
    g_derived = reversed_char_poly(derived_adjacency(v), settings=settings)
    g_base = reversed_char_poly(adjacency_matrix(v.base), settings=settings)
    r_derived = taylor_at_one(g_derived)[0]
    r_base = taylor_at_one(g_base)[0]

    trivial = character_L(gamma, v.group.trivial_character())
    trivial_matches = trivial == CyclotomicPolynomial.from_int_poly(e, g_base)
    product = CyclotomicPolynomial.from_int_poly(e, g_base)
    orders: Dict[str, int] = {}
    for psi in v.group.characters():
        if psi.is_trivial:
            continue
        factor = character_L(gamma, psi)
        orders[element_label(psi.exponents)] = factor.order_at_one()
        product = product * factor
    expected = CyclotomicPolynomial.from_int_poly(e, g_derived)
    difference = [f"u^{k}: {c}" for k, c in enumerate((expected - product).coefficients) if not c.is_zero]
    additive = r_derived == r_base + sum(orders.values())
    if not additive:
        difference.append(f"r mismatch: {r_derived} != {r_base} + {sum(orders.values())}")
    holds = not difference and trivial_matches
    logger.debug("Product decomposition over group %s: %s", v.group.cyclic_orders, holds)
    return ProductDecompositionReport(holds, r_derived, r_base, orders, trivial_matches, difference)


def intermediate_action(v: VoltageAssignment, h: Subgroup) -> Tuple[Digraph, GroupAction]:
    """X(G, H, α) with the translation action of G/H on cosets."""
    z = intermediate_quotient(v, h)
    quotient, project = quotient_group(v.group, h)
    lift: Dict[Element, Element] = {}
    for g in v.group.elements:
        lift.setdefault(project(g), g)
    reps = h.coset_representatives
    k = len(reps)

    def shift(gamma: Element, index: int) -> int:
        block, position = divmod(index, k)
        return block * k + h.coset_index[v.group.add(reps[position], lift[gamma])]

    return z, GroupAction.from_callables(quotient, z, shift, shift)


def inflation_check(v: VoltageAssignment, h: Subgroup, settings: Optional[Settings] = None) -> bool:
    """π(γ_{Y/X}(u)) = γ_{Z/X}(u) for Z = Y_H, the right side read off Z directly."""
    inflated, _ = inflate(equivariant_zeta(v, settings), h)
    z, action = intermediate_action(v, h)
    return inflated == equivariant_zeta_of_action(z, action, settings=settings)


def induction_check(v: VoltageAssignment, h: Subgroup, settings: Optional[Settings] = None) -> bool:
    """N(γ_{Y/X}(u)) = γ_{Y/Y_H}(u), the right side from the action of H on Y."""
    y, _, action = derived_digraph(v)
    norm = induction_norm(equivariant_zeta(v, settings), h, settings)
    return norm == equivariant_zeta_of_action(y, action, subgroup=h, settings=settings)

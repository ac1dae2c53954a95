"""Digraphs, morphisms, covers, group actions and deck transformation groups."""

import logging
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from itertools import product
from typing import Callable, Dict, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .config import DEFAULT_SETTINGS, Settings
from .errors import PreconditionError
from .groups import FiniteAbelianGroup, Subgroup
from .linalg import IntMatrix

logger = logging.getLogger(__name__)


class Edge(NamedTuple):
    """Edge with dense vertex indices for origin and target."""
    label: str
    origin: int
    target: int


@dataclass(frozen=True)
class Digraph:
    """Finite directed multigraph; loops and parallel edges allowed.

    Vertices and edges are addressed by their dense construction index.
    """
    vertex_labels: Tuple[str, ...]
    edges: Tuple[Edge, ...]

    def __post_init__(self):
        if len(set(self.vertex_labels)) != len(self.vertex_labels):
            raise ValueError("Vertex labels must be unique")
        if len({e.label for e in self.edges}) != len(self.edges):
            raise ValueError("Edge labels must be unique")
        n = len(self.vertex_labels)
        for e in self.edges:
            if not (0 <= e.origin < n and 0 <= e.target < n):
                raise ValueError(f"Edge '{e.label}' has an endpoint outside the vertex set")

    @classmethod
    def from_labels(cls, vertices: Sequence[str],
                    edges: Sequence[Tuple[str, str, str]]) -> 'Digraph':
        """Build a digraph from (edge label, origin label, target label) triples."""
        index = {v: i for i, v in enumerate(vertices)}
        return cls(tuple(vertices), tuple(Edge(label, index[o], index[t]) for label, o, t in edges))

    @property
    def num_vertices(self) -> int:
        return len(self.vertex_labels)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @cached_property
    def out_edges(self) -> Tuple[Tuple[int, ...], ...]:
        """Indices of edges leaving each vertex."""
        table: List[List[int]] = [[] for _ in self.vertex_labels]
        for k, e in enumerate(self.edges):
            table[e.origin].append(k)
        return tuple(tuple(row) for row in table)

    @cached_property
    def in_edges(self) -> Tuple[Tuple[int, ...], ...]:
        """Indices of edges entering each vertex."""
        table: List[List[int]] = [[] for _ in self.vertex_labels]
        for k, e in enumerate(self.edges):
            table[e.target].append(k)
        return tuple(tuple(row) for row in table)

    @cached_property
    def vertex_index(self) -> Dict[str, int]:
        return {v: i for i, v in enumerate(self.vertex_labels)}

    @cached_property
    def edge_index(self) -> Dict[str, int]:
        return {e.label: k for k, e in enumerate(self.edges)}


def bouquet(k: int, prefix: str = 'e') -> Digraph:
    """Single-vertex digraph with k loops."""
    return Digraph(('v',), tuple(Edge(f"{prefix}{i}", 0, 0) for i in range(1, k + 1)))


def digraph_from_adjacency(matrix: Sequence[Sequence[int]]) -> Digraph:
    """Digraph whose adjacency entry (i, j) counts edges v_j -> v_i."""
    n = len(matrix)
    vertices = tuple(f"v{i + 1}" for i in range(n))
    edges = []
    for j in range(n):
        for i in range(n):
            for k in range(matrix[i][j]):
                edges.append(Edge(f"e{j + 1}_{i + 1}_{k + 1}", j, i))
    return Digraph(vertices, tuple(edges))


def adjacency_matrix(d: Digraph) -> IntMatrix:
    """Adjacency operator; entry (i, j) counts edges from v_j to v_i."""
    a = np.zeros((d.num_vertices, d.num_vertices), dtype=object)
    for e in d.edges:
        a[e.target, e.origin] += 1
    return IntMatrix.from_numpy(a)


def matrix_is_strongly_connected(a: IntMatrix) -> bool:
    """Strong connectivity of the digraph with adjacency matrix ``a``."""
    n = a.rows
    if n == 0:
        return False
    if n == 1:
        return True
    rows, cols = np.nonzero(a.to_numpy() != 0)
    # adjacency is column-to-row; csgraph expects row-to-column
    graph = csr_matrix((np.ones(len(rows)), (cols, rows)), shape=(n, n))
    count, _ = connected_components(graph, directed=True, connection='strong')
    return count == 1


def is_strongly_connected(d: Digraph) -> bool:
    """True iff every ordered pair of distinct vertices is joined by a path.

    The empty digraph is not considered strongly connected.
    """
    return matrix_is_strongly_connected(adjacency_matrix(d))


def closed_paths_by_enumeration(d: Digraph, m: int) -> int:
    """Count closed paths of length m by walking every edge sequence."""
    if m < 1:
        raise ValueError("Path length must be positive")
    total = 0
    for start in range(d.num_edges):
        origin = d.edges[start].origin
        frontier = [d.edges[start].target]
        for _ in range(m - 1):
            frontier = [d.edges[k].target for v in frontier for k in d.out_edges[v]]
        total += sum(1 for v in frontier if v == origin)
    return total


def count_closed_paths(d: Digraph, m: int, method: str = 'auto') -> int:
    """Number N_m of closed paths of length m (starting edge distinguished).

    Args:
        d: Digraph
        m: Positive path length
        method: 'enumerate', 'trace' or 'auto' (enumerate for m <= 3)
    Returns:
        N_m
    Raises:
        ValueError: If m is not positive
    """
    if m < 1:
        raise ValueError("Path length must be positive")
    if method == 'auto':
        method = 'enumerate' if m <= 3 else 'trace'
    if method == 'enumerate':
        return closed_paths_by_enumeration(d, m)
    if method == 'trace':
        power = np.linalg.matrix_power(adjacency_matrix(d).to_numpy(), m) if d.num_vertices else None
        return int(sum(power[i, i] for i in range(d.num_vertices))) if power is not None else 0
    raise ValueError(f"Unknown method '{method}'")


@dataclass(frozen=True)
class DigraphMorphism:
    """Incidence-compatible pair of maps on vertex and edge indices."""
    source: Digraph
    target: Digraph
    vertex_map: Tuple[int, ...]
    edge_map: Tuple[int, ...]

    def __post_init__(self):
        if len(self.vertex_map) != self.source.num_vertices:
            raise PreconditionError("Vertex map does not cover the source vertices")
        if len(self.edge_map) != self.source.num_edges:
            raise PreconditionError("Edge map does not cover the source edges")
        for k, e in enumerate(self.source.edges):
            image = self.target.edges[self.edge_map[k]]
            if self.vertex_map[e.origin] != image.origin or self.vertex_map[e.target] != image.target:
                raise PreconditionError(f"Edge '{e.label}' breaks incidence compatibility")

    def fiber(self, v: int) -> List[int]:
        return [w for w, image in enumerate(self.vertex_map) if image == v]


def identity_morphism(d: Digraph) -> DigraphMorphism:
    return DigraphMorphism(d, d, tuple(range(d.num_vertices)), tuple(range(d.num_edges)))


def compose(outer: DigraphMorphism, inner: DigraphMorphism) -> DigraphMorphism:
    """outer ∘ inner."""
    if inner.target != outer.source:
        raise PreconditionError("Morphisms are not composable")
    return DigraphMorphism(
        inner.source, outer.target,
        tuple(outer.vertex_map[v] for v in inner.vertex_map),
        tuple(outer.edge_map[e] for e in inner.edge_map))


def pushforward_matrix(f: DigraphMorphism) -> IntMatrix:
    """Matrix of the Z-linear map ZV_source -> ZV_target induced by f on vertices."""
    m = np.zeros((f.target.num_vertices, f.source.num_vertices), dtype=object)
    for w, v in enumerate(f.vertex_map):
        m[v, w] = 1
    return IntMatrix.from_numpy(m)


def check_cover(f: DigraphMorphism) -> bool:
    """True iff f is surjective on vertices and locally bijective on edges."""
    if set(f.vertex_map) != set(range(f.target.num_vertices)):
        return False
    for w in range(f.source.num_vertices):
        v = f.vertex_map[w]
        for local, base in ((f.source.out_edges, f.target.out_edges),
                            (f.source.in_edges, f.target.in_edges)):
            images = sorted(f.edge_map[k] for k in local[w])
            if images != sorted(base[v]):
                return False
    return True


@dataclass(frozen=True)
class GroupAction:
    """Action of a finite abelian group on a digraph by permutation tables.

    ``vertex_table[i]`` and ``edge_table[i]`` are the permutations induced by the
    i-th group element in canonical order.
    """
    group: FiniteAbelianGroup
    digraph: Digraph
    vertex_table: Tuple[Tuple[int, ...], ...]
    edge_table: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        elements = self.group.elements
        if len(self.vertex_table) != len(elements) or len(self.edge_table) != len(elements):
            raise PreconditionError("Action tables must have one row per group element")
        identity = self.group.element_index(self.group.identity)
        if (self.vertex_table[identity] != tuple(range(self.digraph.num_vertices))
                or self.edge_table[identity] != tuple(range(self.digraph.num_edges))):
            raise PreconditionError("Identity element does not act trivially")
        # compatibility with the cyclic generators implies it for all pairs
        rank = len(self.group.cyclic_orders)
        generators = [tuple(1 if i == k else 0 for i in range(rank)) for k in range(rank)]
        for g, s in product(range(len(elements)), generators):
            s = self.group.reduce(s)
            gs = self.group.element_index(self.group.add(elements[g], s))
            si = self.group.element_index(s)
            if any(self.vertex_table[gs][v] != self.vertex_table[si][self.vertex_table[g][v]]
                   for v in range(self.digraph.num_vertices)):
                raise PreconditionError("Vertex action is not compatible with composition")
            if any(self.edge_table[gs][e] != self.edge_table[si][self.edge_table[g][e]]
                   for e in range(self.digraph.num_edges)):
                raise PreconditionError("Edge action is not compatible with composition")
        for row_v, row_e in zip(self.vertex_table, self.edge_table):
            for k, e in enumerate(self.digraph.edges):
                image = self.digraph.edges[row_e[k]]
                if image.origin != row_v[e.origin] or image.target != row_v[e.target]:
                    raise PreconditionError("Action does not preserve incidence")

    @classmethod
    def from_callables(cls, group: FiniteAbelianGroup, digraph: Digraph,
                       on_vertex: Callable[[Tuple[int, ...], int], int],
                       on_edge: Callable[[Tuple[int, ...], int], int]) -> 'GroupAction':
        """Tabulate an action given as functions of (element, index)."""
        return cls(group, digraph,
                   tuple(tuple(on_vertex(g, v) for v in range(digraph.num_vertices))
                         for g in group.elements),
                   tuple(tuple(on_edge(g, e) for e in range(digraph.num_edges))
                         for g in group.elements))

    def act_vertex(self, g: Tuple[int, ...], v: int) -> int:
        return self.vertex_table[self.group.element_index(g)][v]

    def act_edge(self, g: Tuple[int, ...], e: int) -> int:
        return self.edge_table[self.group.element_index(g)][e]

    @property
    def is_vertex_free(self) -> bool:
        identity = self.group.element_index(self.group.identity)
        return all(row[v] != v
                   for i, row in enumerate(self.vertex_table) if i != identity
                   for v in range(self.digraph.num_vertices))


def _orbits(tables: Sequence[Sequence[int]], size: int) -> Tuple[List[int], List[int]]:
    """Orbit index of every point (orbits ordered by least member) and orbit representatives."""
    orbit_of = [-1] * size
    representatives: List[int] = []
    for x in range(size):
        if orbit_of[x] == -1:
            for row in tables:
                orbit_of[row[x]] = len(representatives)
            representatives.append(x)
    return orbit_of, representatives


def quotient_digraph(d: Digraph, a: GroupAction,
                     subgroup: Optional[Subgroup] = None) -> Tuple[Digraph, DigraphMorphism]:
    """Orbit digraph of an action and the natural projection.

    Args:
        d: Digraph acted upon
        a: Group action on d
        subgroup: Restrict the action to this subgroup (whole group by default)
    Returns:
        (quotient digraph, projection morphism); orbits are labelled by their least member
    Raises:
        PreconditionError: If the action is not an action on d, or subgroup belongs to another group
    """
    if a.digraph != d:
        raise PreconditionError("Action is defined on a different digraph")
    if subgroup is not None and subgroup.group != a.group:
        raise PreconditionError("Subgroup of a different group")
    members = a.group.elements if subgroup is None else sorted(subgroup.elements)
    rows = [a.group.element_index(g) for g in members]
    vertex_orbit, vertex_reps = _orbits([a.vertex_table[i] for i in rows], d.num_vertices)
    edge_orbit, edge_reps = _orbits([a.edge_table[i] for i in rows], d.num_edges)
    quotient = Digraph(
        tuple(d.vertex_labels[v] for v in vertex_reps),
        tuple(Edge(d.edges[e].label, vertex_orbit[d.edges[e].origin], vertex_orbit[d.edges[e].target])
              for e in edge_reps))
    return quotient, DigraphMorphism(d, quotient, tuple(vertex_orbit), tuple(edge_orbit))


def _lift_automorphism(f: DigraphMorphism, start: int, image: int) -> Optional[DigraphMorphism]:
    """Extend start -> image to a deck transformation by edge lifting, if possible."""
    y = f.source
    vertex_map: List[Optional[int]] = [None] * y.num_vertices
    edge_map: List[Optional[int]] = [None] * y.num_edges
    vertex_map[start] = image
    queue = deque([start])
    while queue:
        w = queue.popleft()
        lifts = {f.edge_map[k]: k for k in y.out_edges[vertex_map[w]]}
        for k in y.out_edges[w]:
            partner = lifts[f.edge_map[k]]
            edge_map[k] = partner
            t, t_image = y.edges[k].target, y.edges[partner].target
            if vertex_map[t] is None:
                vertex_map[t] = t_image
                queue.append(t)
            elif vertex_map[t] != t_image:
                return None
    if None in vertex_map or None in edge_map:
        return None
    if len(set(vertex_map)) != y.num_vertices or len(set(edge_map)) != y.num_edges:
        return None
    return DigraphMorphism(y, y, tuple(vertex_map), tuple(edge_map))


def deck_group(f: DigraphMorphism, settings: Optional[Settings] = None) -> List[DigraphMorphism]:
    """All deck transformations of a cover with strongly connected source.

    Args:
        f: Covering morphism
        settings: deck_fiber_cap bounds the fiber size searched
    Returns:
        Deck transformations, identity first
    Raises:
        PreconditionError: If f is not a cover, the source is not strongly
            connected, or the fiber exceeds the cap
    """
    settings = settings or DEFAULT_SETTINGS
    if not check_cover(f):
        raise PreconditionError("deck_group requires a covering morphism")
    if not is_strongly_connected(f.source):
        raise PreconditionError("deck_group requires a strongly connected source")
    base = 0
    fiber = f.fiber(f.vertex_map[base])
    if len(fiber) > settings.deck_fiber_cap:
        raise PreconditionError(
            f"Fiber of size {len(fiber)} exceeds the cap of {settings.deck_fiber_cap}")
    deck = []
    for candidate in fiber:
        sigma = _lift_automorphism(f, base, candidate)
        if sigma is not None:
            deck.append(sigma)
    logger.debug("Deck group of order %d over fiber of size %d", len(deck), len(fiber))
    return deck


def is_galois(f: DigraphMorphism, settings: Optional[Settings] = None) -> bool:
    """True iff the deck group acts transitively on every vertex fiber."""
    deck = deck_group(f, settings)
    for v in range(f.target.num_vertices):
        fiber = f.fiber(v)
        if {sigma.vertex_map[fiber[0]] for sigma in deck} != set(fiber):
            return False
    return True

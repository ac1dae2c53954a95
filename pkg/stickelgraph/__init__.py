"""stickelgraph - Bowen-Franks groups, zeta functions and Stickelberger covers of digraphs."""

from .digraph import (
    Digraph,
    DigraphMorphism,
    Edge,
    GroupAction,
    adjacency_matrix,
    bouquet,
    check_cover,
    count_closed_paths,
    deck_group,
    is_galois,
    is_strongly_connected,
    quotient_digraph
)
from .linalg import IntMatrix, Lattice, smith_normal_form
from .polynomials import IntPolynomial, reversed_char_poly
from .bowen_franks import (
    BFGroupStructure,
    ZetaReport,
    bf_group,
    cover_divisibility_report,
    r_invariant_m,
    zeta_report
)
from .groups import Character, FiniteAbelianGroup, GroupRingElement, Subgroup
from .voltage import (
    VoltageAssignment,
    derived_digraph,
    equivariant_zeta,
    intermediate_quotient,
    product_decomposition_check
)
from .stickelberger import (
    bernoulli_b1,
    minus_class_number,
    plus_quotient_analysis,
    stickelberger_cover,
    stickelberger_element,
    verify_theorem_a
)
from .padic import isotypic_cardinality, teichmuller_check, unramified_context, verify_theorem_b
from .config import Settings

__version__ = '0.1.0'

__all__ = [
    'Digraph',
    'DigraphMorphism',
    'Edge',
    'GroupAction',
    'adjacency_matrix',
    'bouquet',
    'check_cover',
    'count_closed_paths',
    'deck_group',
    'is_galois',
    'is_strongly_connected',
    'quotient_digraph',
    'IntMatrix',
    'Lattice',
    'smith_normal_form',
    'IntPolynomial',
    'reversed_char_poly',
    'BFGroupStructure',
    'ZetaReport',
    'bf_group',
    'cover_divisibility_report',
    'r_invariant_m',
    'zeta_report',
    'Character',
    'FiniteAbelianGroup',
    'GroupRingElement',
    'Subgroup',
    'VoltageAssignment',
    'derived_digraph',
    'equivariant_zeta',
    'intermediate_quotient',
    'product_decomposition_check',
    'bernoulli_b1',
    'minus_class_number',
    'plus_quotient_analysis',
    'stickelberger_cover',
    'stickelberger_element',
    'verify_theorem_a',
    'isotypic_cardinality',
    'teichmuller_check',
    'unramified_context',
    'verify_theorem_b',
    'Settings'
]

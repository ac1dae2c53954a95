"""Unramified l-adic contexts and isotypic cardinalities of Bowen-Franks groups.

Elements of the valuation ring O = Z_l[ζ_n] are handled modulo l^k as
coefficient tuples in the basis 1, x, ..., x^(f-1) of Z[x]/(F, l^k), where F is
a Hensel-lifted irreducible factor of Φ_n. Since l does not divide n the
extension is unramified, so the valuation of an element is the least
valuation of its coefficients.
"""

import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Dict, Iterable, List, Optional, Tuple

from sympy import ZZ, Poly, Symbol, cyclotomic_poly, isprime, multiplicity
from sympy.ntheory import n_order
from sympy.polys.densearith import dup_mul, dup_rem
from sympy.polys.factortools import dup_zz_hensel_lift

from .bowen_franks import bf_operator_from_adjacency, bf_structure
from .config import DEFAULT_SETTINGS, Settings
from .errors import ConsistencyError, PrecisionCapError, PreconditionError
from .groups import Character
from .stickelberger import (UnitGroup, check_odd_prime, minus_class_number, odd_character_resultant,
                            stickelberger_cover, stickelberger_element, unit_group)

logger = logging.getLogger(__name__)

_X = Symbol('x')

Vector = Tuple[int, ...]


def _dense(ascending: Iterable[int]) -> List:
    return [ZZ(c) for c in reversed(list(ascending))]


def _ascending(dense: List, size: int, q: int) -> Vector:
    coeffs = [int(c) % q for c in reversed(dense)]
    return tuple(coeffs + [0] * (size - len(coeffs)))


def ell_part(value: int, ell: int) -> int:
    """Largest power of ell dividing value, and 0 for value 0."""
    value = abs(value)
    return ell ** multiplicity(ell, value) if value else 0


@dataclass(frozen=True)
class PadicContext:
    """O / l^k O presented as (Z / l^k)[x] / (modulus).

    ``modulus`` is monic of degree f in ascending order, irreducible mod l and
    dividing Φ_n mod l^k. The class of x is the chosen primitive n-th root of unity.
    """
    ell: int
    n: int
    f: int
    modulus: Vector
    precision: int
    factor_index: int = 0

    @property
    def q(self) -> int:
        return self.ell ** self.precision

    def reduce(self, coefficients: Iterable[int]) -> Vector:
        """Reduce an ascending coefficient sequence modulo (modulus, l^k)."""
        remainder = dup_rem(_dense(coefficients), _dense(self.modulus), ZZ)
        return _ascending(remainder, self.f, self.q)

    def mul(self, a: Vector, b: Vector) -> Vector:
        return self.reduce(_ascending(dup_mul(_dense(a), _dense(b), ZZ), 0, self.q))

    @cached_property
    def root_powers(self) -> Tuple[Vector, ...]:
        """ζ^0, ..., ζ^(n-1) with ζ the class of x."""
        zeta = self.reduce((0, 1))
        powers = [self.reduce((1,))]
        for _ in range(1, self.n):
            powers.append(self.mul(powers[-1], zeta))
        return tuple(powers)

    def character_sum(self, terms: Iterable[Tuple[int, int]]) -> Vector:
        """Σ c·ζ^e over (e, c) pairs."""
        total = [0] * self.f
        for exponent, c in terms:
            for k, x in enumerate(self.root_powers[exponent % self.n]):
                total[k] += c * x
        return tuple(x % self.q for x in total)

    def valuation(self, a: Vector) -> Optional[int]:
        """l-adic valuation, or None if a vanishes at this precision."""
        nonzero = [c for c in a if c % self.q]
        if not nonzero:
            return None
        return min(multiplicity(self.ell, c) for c in nonzero)

    def with_precision(self, precision: int) -> 'PadicContext':
        return unramified_context(self.ell, self.n, precision, self.factor_index)


def _factors_mod_ell(phi: Poly, ell: int) -> List[List[int]]:
    """Monic irreducible factors of Φ_n mod l, descending coefficients in [0, l), sorted."""
    _, factors = Poly(phi.as_expr(), _X, modulus=ell).factor_list()
    normalized = [[int(c) % ell for c in factor.all_coeffs()] for factor, _ in factors]
    return sorted(normalized)


def unramified_context(ell: int, n: int, k: int, factor_index: int = 0) -> PadicContext:
    """Context for Z_l[μ_n] at precision l^k.

    Factors Φ_n mod l, takes the ``factor_index``-th factor in lexicographic
    order of its coefficient list and Hensel-lifts it modulo l^k.

    Args:
        ell: Prime l
        n: Root-of-unity order, not divisible by l
        k: Number of l-adic digits
        factor_index: Which irreducible factor of Φ_n mod l to lift
    Returns:
        PadicContext
    Raises:
        PreconditionError: If l is not prime, l divides n, or factor_index is out of range
        ConsistencyError: If the lifted modulus fails to divide Φ_n mod l^k
    """
    if not isprime(ell):
        raise PreconditionError(f"{ell} is not prime")
    if n < 1 or k < 1:
        raise PreconditionError("Root order and precision must be positive")
    if n % ell == 0:
        raise PreconditionError(f"l = {ell} divides n = {n}; only unramified contexts are supported")
    phi = cyclotomic_poly(n, _X, polys=True)
    factors = _factors_mod_ell(phi, ell)
    if not 0 <= factor_index < len(factors):
        raise PreconditionError(f"Φ_{n} has {len(factors)} factors mod {ell}, no index {factor_index}")
    q = ell ** k
    phi_dense = [ZZ(int(c)) for c in phi.all_coeffs()]
    if len(factors) == 1:
        lifted = phi_dense
    else:
        lifted = dup_zz_hensel_lift(ZZ(ell), phi_dense,
                                    [[ZZ(c) for c in factor] for factor in factors], k, ZZ)[factor_index]
    modulus = _ascending(lifted, 0, q)
    f = n_order(ell, n) if n > 1 else 1
    if len(modulus) - 1 != f or modulus[-1] != 1:
        raise ConsistencyError(f"Lifted factor of degree {len(modulus) - 1}, expected monic of degree {f}")
    if [c % ell for c in reversed(modulus)] != factors[factor_index]:
        raise ConsistencyError("Lifted factor does not reduce to the chosen factor mod l")
    if any(int(c) % q for c in dup_rem(phi_dense, _dense(modulus), ZZ)):
        raise ConsistencyError(f"Lifted factor does not divide Φ_{n} mod {ell}^{k}")
    logger.debug("Context l = %d, n = %d, f = %d, precision %d", ell, n, f, k)
    return PadicContext(ell, n, f, modulus, k, factor_index)


def _resolve_valuation(ctx: PadicContext, compute: Callable[[PadicContext], Vector],
                       settings: Settings) -> Tuple[int, PadicContext]:
    """Valuation of compute(ctx), doubling the precision while the value vanishes."""
    while True:
        v = ctx.valuation(compute(ctx))
        if v is not None:
            return v, ctx
        if ctx.precision >= settings.precision_cap:
            raise PrecisionCapError(
                f"Value vanishes modulo {ctx.ell}^{ctx.precision}; precision cap {settings.precision_cap} reached")
        precision = min(2 * ctx.precision, settings.precision_cap)
        logger.debug("Raising l-adic precision from %d to %d", ctx.precision, precision)
        ctx = ctx.with_precision(precision)


def _check_setup(p: int, ell: int, psi: Character, ctx: PadicContext) -> None:
    if (p - 1) % ell == 0:
        raise PreconditionError(f"l = {ell} divides p - 1 = {p - 1}")
    if ctx.ell != ell or ctx.n != p - 1:
        raise PreconditionError(f"Context is for l = {ctx.ell}, n = {ctx.n}")
    if psi.group.cyclic_orders != (p - 1,):
        raise PreconditionError("Character is not a character of (Z/p)^x")


def isotypic_cardinality(p: int, ell: int, psi: Character, ctx: PadicContext,
                         settings: Optional[Settings] = None, generator: Optional[int] = None) -> int:
    """#e_ψ BF_O(Y) = |ψ(pθ)|_l^(-f).

    Raises:
        PreconditionError: If l | p - 1, or ψ is even and nontrivial (free component)
        PrecisionCapError: If ψ(pθ) vanishes up to the precision cap
    """
    settings = settings or DEFAULT_SETTINGS
    _check_setup(p, ell, psi, ctx)
    if not psi.is_trivial and not psi.is_odd:
        raise PreconditionError("Even nontrivial components are free of rank one")
    element = stickelberger_element(p, generator)
    terms = [(psi.power_at(g), c) for g, c in element.terms]
    v, _ = _resolve_valuation(ctx, lambda c: c.character_sum(terms), settings)
    return ell ** (ctx.f * v)


def cl_cardinality(p: int, ell: int, psi: Character, ctx: PadicContext,
                   settings: Optional[Settings] = None, units: Optional[UnitGroup] = None) -> int:
    """#e_ψ Cl^-_O(K) = |B_{1,ψ^{-1}}|_l^(-f) for odd ψ other than the Teichmüller character.

    B_{1,ψ^{-1}} = S / p with S = Σ i ψ^{-1}(σ_i), so v(B) = v(S) - [l = p].

    Raises:
        PreconditionError: If ψ is not odd or the valuation is negative
    """
    settings = settings or DEFAULT_SETTINGS
    units = units or unit_group(p)
    _check_setup(p, ell, psi, ctx)
    if not psi.is_odd:
        raise PreconditionError("Class group components are computed for odd characters only")
    inverse = psi.inverse()
    terms = [(inverse.power_at(units.sigma(i)), i) for i in range(1, p)]
    v, _ = _resolve_valuation(ctx, lambda c: c.character_sum(terms), settings)
    v -= int(ell == p)
    if v < 0:
        raise PreconditionError(f"B_1 of {psi.exponents} is not l-integral")
    return ell ** (ctx.f * v)


def teichmuller_character(p: int, ctx: Optional[PadicContext] = None,
                          units: Optional[UnitGroup] = None) -> Character:
    """The character ω with ω(σ_a) ≡ a modulo the maximal ideal of the l = p context."""
    units = units or unit_group(p)
    ctx = ctx or unramified_context(p, p - 1, DEFAULT_SETTINGS.precision_start)
    root = -ctx.modulus[0] % p
    for a in range(p - 1):
        if pow(root, a, p) == units.generator:
            return units.character(a)
    raise ConsistencyError(f"No power of the root {root} is the generator {units.generator} mod {p}")


def teichmuller_check(p: int, settings: Optional[Settings] = None) -> bool:
    """pB_{1,ω^{-1}} ≡ p - 1 (mod p)."""
    settings = settings or DEFAULT_SETTINGS
    check_odd_prime(p, settings)
    units = unit_group(p)
    ctx = unramified_context(p, p - 1, settings.precision_start)
    omega = teichmuller_character(p, ctx, units)
    inverse = omega.inverse()
    value = ctx.character_sum((inverse.power_at(units.sigma(i)), i) for i in range(1, p))
    return value[0] % p == p - 1


def frobenius_orbits(ell: int, n: int, indices: Iterable[int]) -> List[Tuple[int, ...]]:
    """Orbits of j -> l·j mod n on the given character indices, each starting at its least member."""
    remaining = sorted(set(indices))
    seen = set()
    orbits = []
    for j in remaining:
        if j in seen:
            continue
        orbit = []
        x = j
        while x not in orbit:
            orbit.append(x)
            x = x * ell % n
        seen.update(orbit)
        orbits.append(tuple(orbit))
    return orbits


@dataclass
class CharacterComponent:
    """Both sides of the isotypic comparison for one odd character."""
    psi_index: int
    parity: str
    bf_card: int
    cl_card: int
    relation: str
    holds: bool

    def to_dict(self) -> Dict:
        return dict(self.__dict__)


@dataclass
class TheoremBRecord:
    """Per-character cardinalities of BF_O(Y) against the Mazur-Wiles side."""
    p: int
    ell: int
    f: int
    generator: int
    factor_index: int
    components: List[CharacterComponent]
    trivial_card: int
    teichmuller_index: Optional[int]
    orbits: List[Tuple[int, ...]]
    orbit_cardinalities: List[List[int]]
    bf_minus_order: int
    h_minus: int
    global_consistent: bool
    class_number_consistent: bool
    norm_consistent: bool
    mismatches: List[str] = field(default_factory=list)

    @property
    def holds(self) -> bool:
        return not self.mismatches

    @property
    def per_psi(self) -> List[Dict]:
        return [c.to_dict() for c in self.components]

    def to_dict(self) -> Dict:
        return {
            'p': self.p,
            'ell': self.ell,
            'f': self.f,
            'per_psi': [{key: c.to_dict()[key] for key in ('psi_index', 'parity', 'bf_card', 'cl_card', 'relation')}
                        for c in self.components],
            'global_consistent': self.global_consistent,
            'class_number_consistent': self.class_number_consistent,
            'norm_consistent': self.norm_consistent,
            'trivial_card': self.trivial_card,
            'teichmuller_index': self.teichmuller_index,
            'orbits': [list(o) for o in self.orbits],
            'orbit_cardinalities': [list(c) for c in self.orbit_cardinalities],
            'h_minus': self.h_minus,
            'holds': self.holds,
            'mismatches': list(self.mismatches),
        }


def verify_theorem_b(p: int, ell: int, settings: Optional[Settings] = None,
                     generator: Optional[int] = None, factor_index: int = 0) -> TheoremBRecord:
    """Compare #e_ψ BF_O(Y) with #e_ψ Cl^-_O(K) for every odd ψ.

    For l = p the relation is bf = p·cl, except for the Teichmüller character
    where both sides are 1; for l ≠ p it is bf = cl. Also checks the product of
    the odd components against the SNF side, the l-part of h^- and the l-part
    of the resultant Π_{ψ odd} ψ(pθ).

    Raises:
        PreconditionError: If l | p - 1 or p is not a usable odd prime
    """
    settings = settings or DEFAULT_SETTINGS
    check_odd_prime(p, settings)
    if not isprime(ell):
        raise PreconditionError(f"{ell} is not prime")
    if (p - 1) % ell == 0:
        raise PreconditionError(f"l = {ell} divides p - 1 = {p - 1}")
    units = unit_group(p, generator)
    ctx = unramified_context(ell, p - 1, settings.precision_start, factor_index)
    omega_index = teichmuller_character(p, ctx, units).exponents[0] if ell == p else None

    components = []
    mismatches = []
    cards: Dict[int, int] = {}
    for psi in units.odd_characters():
        j = psi.exponents[0]
        bf_card = isotypic_cardinality(p, ell, psi, ctx, settings, units.generator)
        if j == omega_index:
            cl_card, relation, expected = 1, "teichmuller: bf = cl = 1", 1
        else:
            cl_card = cl_cardinality(p, ell, psi, ctx, settings, units)
            relation = "bf = p*cl" if ell == p else "bf = cl"
            expected = p * cl_card if ell == p else cl_card
        ok = bf_card == expected
        if not ok:
            mismatches.append(f"ψ_{j}: bf {bf_card}, cl {cl_card}, relation {relation}")
        cards[j] = bf_card
        components.append(CharacterComponent(j, psi.parity, bf_card, cl_card, relation, ok))
    trivial_card = isotypic_cardinality(p, ell, units.character(0), ctx, settings, units.generator)

    cover = stickelberger_cover(p, units.generator, settings)
    bf = bf_structure(bf_operator_from_adjacency(cover.adjacency()))
    torsion_part = ell_part(bf.torsion_order, ell)
    bf_minus_order = torsion_part // p if ell == p else torsion_part
    odd_product = 1
    for card in cards.values():
        odd_product *= card
    global_consistent = odd_product == bf_minus_order ** ctx.f and odd_product * trivial_card == torsion_part ** ctx.f
    if not global_consistent:
        mismatches.append(f"Π odd components {odd_product}, SNF minus part {bf_minus_order}^{ctx.f}")

    h_minus = minus_class_number(p, generator=units.generator)
    expected_minus = ell_part(h_minus, ell) * (p ** ((p - 3) // 2) if ell == p else 1)
    class_number_consistent = bf_minus_order == expected_minus
    if not class_number_consistent:
        mismatches.append(f"#BF^- l-part {bf_minus_order}, expected {expected_minus} from h^- = {h_minus}")

    resultant = odd_character_resultant(p, units)
    norm_consistent = odd_product == ell ** (ctx.f * multiplicity(ell, abs(resultant)))
    if not norm_consistent:
        mismatches.append(f"Π odd components {odd_product} against resultant {resultant}")

    orbits = frobenius_orbits(ell, p - 1, cards)
    orbit_cardinalities = [sorted(cards[j] for j in orbit) for orbit in orbits]
    logger.info("Theorem B at p = %d, l = %d: %s", p, ell, 'ok' if not mismatches else 'MISMATCH')
    return TheoremBRecord(
        p=p, ell=ell, f=ctx.f, generator=units.generator, factor_index=factor_index,
        components=components, trivial_card=trivial_card, teichmuller_index=omega_index,
        orbits=orbits, orbit_cardinalities=orbit_cardinalities, bf_minus_order=bf_minus_order,
        h_minus=h_minus, global_consistent=global_consistent,
        class_number_consistent=class_number_consistent, norm_consistent=norm_consistent,
        mismatches=mismatches)

"""Builtin digraph instances addressable by name from the command line."""

from dataclasses import dataclass
from typing import Callable, Dict, Optional

from .config import DEFAULT_SETTINGS, Settings
from .digraph import Digraph, adjacency_matrix, bouquet, digraph_from_adjacency
from .errors import DigraphFormatError, PreconditionError
from .groups import FiniteAbelianGroup
from .linalg import IntMatrix
from .stickelberger import stickelberger_cover
from .voltage import VoltageAssignment, derived_adjacency, derived_digraph, intermediate_quotient


@dataclass
class Instance:
    """A named digraph, given by its adjacency matrix and, when it is a derived digraph, its voltages."""
    name: str
    description: str
    adjacency: IntMatrix
    build: Callable[[], Digraph]
    voltage: Optional[VoltageAssignment] = None

    @property
    def digraph(self) -> Digraph:
        return self.build()


def _digraph_instance(name: str, description: str, d: Digraph) -> Instance:
    return Instance(name, description, adjacency_matrix(d), lambda: d)


def _voltage_instance(name: str, description: str, voltage: VoltageAssignment) -> Instance:
    return Instance(name, description, derived_adjacency(voltage),
                    lambda: derived_digraph(voltage)[0], voltage)


def example_cover_voltage() -> VoltageAssignment:
    """Three loops over Z/2 with voltages 0, 0, 1: the 2-to-1 cover with adjacency [[2,1],[1,2]]."""
    return VoltageAssignment(bouquet(3), FiniteAbelianGroup.cyclic(2), ((0,), (0,), (1,)))


DEFECTIVE_ADJACENCY = ((3, 1, 1), (2, 2, 1), (1, 2, 2))


def _example_cover(_: Optional[str], settings: Settings) -> Instance:
    return _voltage_instance('example:2.4', "2-to-1 cover of the three-loop bouquet",
                             example_cover_voltage())


def _example_base(_: Optional[str], settings: Settings) -> Instance:
    return _digraph_instance('example:2.4-base', "three-loop bouquet", bouquet(3))


def _defective(_: Optional[str], settings: Settings) -> Instance:
    return _digraph_instance('defective:3', "vanishing order above the Bowen-Franks rank",
                             digraph_from_adjacency(DEFECTIVE_ADJACENCY))


def _parameter(name: str, argument: Optional[str]) -> int:
    if argument is None:
        raise DigraphFormatError(f"Builtin '{name}' needs an integer parameter", name)
    try:
        return int(argument)
    except ValueError:
        raise DigraphFormatError(f"'{argument}' is not an integer", name)


def _bouquet(argument: Optional[str], settings: Settings) -> Instance:
    k = _parameter('bouquet', argument)
    if k < 1:
        raise PreconditionError("A bouquet needs at least one loop")
    return _digraph_instance(f"bouquet:{k}", f"bouquet with {k} loops", bouquet(k))


def _stickelberger(argument: Optional[str], settings: Settings) -> Instance:
    p = _parameter('stickelberger', argument)
    cover = stickelberger_cover(p, settings=settings)
    return Instance(f"stickelberger:{p}", f"Stickelberger cover Y for p = {p}", cover.adjacency(),
                    lambda: cover.derived, cover.voltage)


def _plus(argument: Optional[str], settings: Settings) -> Instance:
    p = _parameter('plus', argument)
    cover = stickelberger_cover(p, settings=settings)
    plus = cover.units.plus_subgroup()
    return Instance(f"plus:{p}", f"plus quotient Y+ for p = {p}", cover.plus_adjacency(),
                    lambda: intermediate_quotient(cover.voltage, plus))


BUILTINS: Dict[str, Callable[[Optional[str], Settings], Instance]] = {
    'example:2.4': _example_cover,
    'example:2.4-base': _example_base,
    'defective:3': _defective,
    'bouquet': _bouquet,
    'stickelberger': _stickelberger,
    'plus': _plus,
}


def is_builtin(name: str) -> bool:
    return name in BUILTINS or name.split(':', 1)[0] in BUILTINS


def get_builtin(name: str, settings: Optional[Settings] = None) -> Instance:
    """Get a builtin instance by name.

    Args:
        name: Fixed name such as ``example:2.4`` or family and parameter such as ``stickelberger:23``
        settings: Limits applied while building the instance
    Returns:
        Instance
    Raises:
        DigraphFormatError: If the name is unknown or its parameter is malformed
        PreconditionError: If the parameter is invalid for the family
    """
    settings = settings or DEFAULT_SETTINGS
    factory = BUILTINS.get(name)
    if factory is not None:
        return factory(None, settings)
    family, _, argument = name.partition(':')
    factory = BUILTINS.get(family)
    if factory is None or not argument:
        raise DigraphFormatError(f"Builtin '{name}' not found")
    return factory(argument, settings)

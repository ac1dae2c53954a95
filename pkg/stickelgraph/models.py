from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

CHECKS = ('a', 'b', 'plus', 'artin')

CHECK_NAMES = {
    'a': 'theorem-a',
    'b': 'theorem-b',
    'plus': 'plus-part',
    'artin': 'artin-formalism',
}

STATUSES = ('pass', 'fail', 'skipped')


@dataclass
class VerificationMatrix:
    """Primes, l values and toggled checks of one verification run.

    ``ells`` may contain the marker ``'p'`` (meaning l = p for each prime).
    """
    primes: List[int]
    ells: List[Any] = field(default_factory=list)
    checks: Tuple[str, ...] = ('a',)

    def __post_init__(self):
        unknown = [c for c in self.checks if c not in CHECKS]
        if unknown:
            raise ValueError(f"Unknown checks: {', '.join(unknown)}")
        self.primes = sorted(set(self.primes))
        self.checks = tuple(c for c in CHECKS if c in self.checks)

    def ells_for(self, p: int) -> List[int]:
        """Concrete l values for the prime p in ascending order."""
        return sorted({p if ell == 'p' else int(ell) for ell in self.ells})

    def cells(self) -> List[Tuple[str, int, Optional[int]]]:
        """(check, p, l) triples in deterministic order; l is None for checks without l."""
        out = []
        for p in self.primes:
            for check in self.checks:
                if check == 'b':
                    out.extend((check, p, ell) for ell in self.ells_for(p))
                else:
                    out.append((check, p, None))
        return sorted(out, key=lambda cell: (cell[1], cell[2] if cell[2] is not None else -1,
                                             CHECKS.index(cell[0])))


@dataclass
class VerificationRow:
    """One executed (or skipped) check."""
    check: str
    p: int
    ell: Optional[int]
    status: str
    notice: str = ""
    record: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"Unknown status '{self.status}'")

    @property
    def failed(self) -> bool:
        return self.status == 'fail'

    def to_dict(self) -> Dict[str, Any]:
        return {
            'check': CHECK_NAMES[self.check],
            'p': self.p,
            'ell': self.ell,
            'status': self.status,
            'notice': self.notice,
            'record': self.record,
        }

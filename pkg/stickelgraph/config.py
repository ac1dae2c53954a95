"""Runtime configuration for stickelgraph."""

import os
from dataclasses import dataclass, replace

from .errors import ConfigurationError

PRIME_CAP_ENV = 'STICKELGRAPH_PRIME_CAP'


@dataclass(frozen=True)
class Settings:
    """Tunable limits shared by all computations."""
    prime_cap: int = 199
    precision_start: int = 8  # l-adic digits
    precision_cap: int = 512
    deck_fiber_cap: int = 512
    interpolation_check_size: int = 8
    cofactor_warn_size: int = 8

    def __post_init__(self):
        for name in ('prime_cap', 'precision_start', 'precision_cap',
                     'deck_fiber_cap', 'interpolation_check_size', 'cofactor_warn_size'):
            if getattr(self, name) < 1:
                raise ConfigurationError(f"{name} must be positive")
        if self.precision_start > self.precision_cap:
            raise ConfigurationError("precision_start exceeds precision_cap")

    @classmethod
    def from_env(cls, environ=None) -> 'Settings':
        """Build settings from defaults and environment overrides.

        Args:
            environ: Mapping to read from (defaults to ``os.environ``)
        Returns:
            Settings instance
        Raises:
            ConfigurationError: If an override is not a positive integer
        """
        environ = os.environ if environ is None else environ
        raw = environ.get(PRIME_CAP_ENV)
        if raw is None or raw == '':
            return cls()
        try:
            cap = int(raw)
        except ValueError:
            raise ConfigurationError(f"{PRIME_CAP_ENV} must be an integer, got '{raw}'")
        return cls(prime_cap=cap)

    def with_overrides(self, **changes) -> 'Settings':
        """Return a copy with the given non-None fields replaced."""
        return replace(self, **{k: v for k, v in changes.items() if v is not None})


DEFAULT_SETTINGS = Settings()

"""Unit tests for runtime settings and the exception hierarchy."""

import pytest

from stickelgraph.config import DEFAULT_SETTINGS, PRIME_CAP_ENV, Settings
from stickelgraph.errors import (ConfigurationError, ConsistencyError, DigraphFormatError,
                                 PrecisionCapError, PreconditionError, PrimeCapError,
                                 StickelgraphError)


def test_defaults():
    """Test the documented default limits."""
    assert DEFAULT_SETTINGS.prime_cap == 199
    assert DEFAULT_SETTINGS.precision_start == 8
    assert DEFAULT_SETTINGS.precision_cap == 512
    assert DEFAULT_SETTINGS.deck_fiber_cap == 512


def test_validation():
    """Test that nonpositive limits and inverted precision bounds are rejected."""
    with pytest.raises(ConfigurationError):
        Settings(prime_cap=0)
    with pytest.raises(ConfigurationError):
        Settings(precision_start=16, precision_cap=8)


def test_from_env():
    """Test the prime cap override from the environment."""
    assert Settings.from_env({}) == Settings()
    assert Settings.from_env({PRIME_CAP_ENV: ''}) == Settings()
    assert Settings.from_env({PRIME_CAP_ENV: '61'}).prime_cap == 61

    with pytest.raises(ConfigurationError):
        Settings.from_env({PRIME_CAP_ENV: 'many'})
    with pytest.raises(ConfigurationError):
        Settings.from_env({PRIME_CAP_ENV: '-3'})


def test_with_overrides():
    """Test that None values leave fields untouched."""
    settings = Settings().with_overrides(precision_cap=64, prime_cap=None)
    assert settings.precision_cap == 64
    assert settings.prime_cap == 199


def test_error_hierarchy():
    """Test which errors are input errors and which are arithmetic failures."""
    assert issubclass(DigraphFormatError, StickelgraphError)
    assert issubclass(StickelgraphError, ValueError)
    assert issubclass(PrimeCapError, PreconditionError)
    assert issubclass(PrecisionCapError, ArithmeticError)
    assert issubclass(ConsistencyError, ArithmeticError)
    assert str(DigraphFormatError("unknown vertex 'x'", 'edges[3].to')) == "edges[3].to: unknown vertex 'x'"
    assert str(DigraphFormatError("bad")) == "bad"

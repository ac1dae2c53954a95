"""Shared fixtures: the 2-to-1 example cover and small Stickelberger covers."""

import pytest

from stickelgraph.catalog import DEFECTIVE_ADJACENCY, example_cover_voltage
from stickelgraph.digraph import bouquet, digraph_from_adjacency
from stickelgraph.stickelberger import stickelberger_cover


def pytest_configure(config):
    config.addinivalue_line('markers', 'slow: full prime sweeps (deselect with -m "not slow")')


@pytest.fixture
def example_voltage():
    """Three loops over Z/2 with voltages 0, 0, 1."""
    return example_cover_voltage()


@pytest.fixture
def three_loops():
    """Bouquet with three loops, the base of the example cover."""
    return bouquet(3)


@pytest.fixture
def defective_digraph():
    """Three-vertex digraph with r = 2 and Bowen-Franks group Z."""
    return digraph_from_adjacency(DEFECTIVE_ADJACENCY)


@pytest.fixture(scope='session')
def cover3():
    return stickelberger_cover(3)


@pytest.fixture(scope='session')
def cover5():
    return stickelberger_cover(5)


@pytest.fixture(scope='session')
def cover7():
    return stickelberger_cover(7)
